import itertools

import pytest

from llo_qkd.core.const import ModelKind
from llo_qkd.core.exceptions import InconsistentBudget
from llo_qkd.core.keyrate import mutual_information
from llo_qkd.core.noise_budget import total_budget
from llo_qkd.core.noise_models import added_noise, trusted_excess_noise
from llo_qkd.core.params import fig2_config
from llo_qkd.models.schemas import DetectorParams, NoiseBudget

T25 = 10 ** -0.5


def _ideal_budget() -> NoiseBudget:
    zeros = dict.fromkeys(
        ["xi0", "xi_am", "xi_le", "xi_adc", "xi_rest", "xi_drift", "xi_channel",
         "xi_error", "xi_error_u", "xi_error_t", "xi_phase", "xi_tot"],
        0.0,
    )
    return NoiseBudget(t=1.0, **zeros)


def test_trusted_excess_noise_table1():
    assert trusted_excess_noise(0.056, 0.0083630, T25) == pytest.approx(0.0295541, rel=1e-5)
    assert trusted_excess_noise(0.056, 0.0, T25) == 0.056


def test_trusted_excess_noise_inconsistent():
    with pytest.raises(InconsistentBudget):
        trusted_excess_noise(0.01, 0.01, 0.5)


def test_table1_added_noise(table1_config):
    budget = total_budget(table1_config)
    detector = table1_config.detector

    conventional = added_noise(budget, detector, budget.t, ModelKind.CONVENTIONAL)
    assert conventional.chi_line == pytest.approx(2.2182777, rel=1e-7)
    assert conventional.chi_het == pytest.approx(2.7214286, rel=1e-7)
    assert conventional.chi_tot == pytest.approx(10.824228, rel=1e-6)

    trusted = added_noise(budget, detector, budget.t, ModelKind.TRUSTED)
    assert trusted.chi_line == pytest.approx(2.1918318, rel=1e-6)
    assert trusted.chi_het == pytest.approx(2.7297916, rel=1e-6)
    assert trusted.chi_tot == pytest.approx(conventional.chi_tot, rel=1e-12)


def test_ideal_heterodyne():
    added = added_noise(_ideal_budget(), DetectorParams(eta=1.0, v_el=0.0), 1.0, ModelKind.CONVENTIONAL)
    assert added.chi_line == 0.0
    assert added.chi_het == 1.0
    assert added.chi_tot == 1.0


def test_trusted_detector_noise_difference(fig2_config):
    budget = total_budget(fig2_config)
    conventional = added_noise(budget, fig2_config.detector, budget.t, ModelKind.CONVENTIONAL)
    trusted = added_noise(budget, fig2_config.detector, budget.t, ModelKind.TRUSTED)
    assert trusted.chi_het - conventional.chi_het == pytest.approx(budget.xi_error_t, rel=1e-12)


def test_trusted_detection_closed_form(fig2_config):
    budget = total_budget(fig2_config)
    trusted = added_noise(budget, fig2_config.detector, budget.t, ModelKind.TRUSTED)
    eta, v_el = 0.5, 0.1
    assert trusted.chi_het == pytest.approx((2 - eta + 2 * v_el) / eta * (1 + 4.0 / 1000.0), rel=1e-12)


def test_all_error_trusted_moves_whole_error(fig2_config):
    budget = total_budget(fig2_config)
    conventional = added_noise(budget, fig2_config.detector, budget.t, ModelKind.CONVENTIONAL)
    all_trusted = added_noise(budget, fig2_config.detector, budget.t, ModelKind.ALL_ERROR_TRUSTED)

    assert conventional.chi_line - all_trusted.chi_line == pytest.approx(budget.xi_error, rel=1e-9)
    assert all_trusted.chi_het - conventional.chi_het == pytest.approx(budget.t * budget.xi_error, rel=1e-9)


def test_added_noise_model_invariance_grid():
    distances = [0.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 80.0, 100.0]
    etas = [0.3, 0.5, 0.7, 1.0]
    hardware = [(0.0, 1000.0), (0.1, 1000.0), (0.3, 100.0), (0.05, 1e4), (0.5, 500.0)]

    count = 0
    for distance, eta, (v_el, e_r2) in itertools.product(distances, etas, hardware):
        config = fig2_config(distance, eta=eta, v_el=v_el, e_r2_bob=e_r2)
        budget = total_budget(config)
        v = config.modulation.v_a + 1.0
        results = [added_noise(budget, config.detector, budget.t, model) for model in ModelKind]

        reference = results[0]
        for added in results[1:]:
            assert added.chi_tot == pytest.approx(reference.chi_tot, rel=1e-12)
            assert mutual_information(v, added.chi_tot) == pytest.approx(
                mutual_information(v, reference.chi_tot), rel=1e-12
            )
        count += 1

    assert count == 200


def test_low_measured_noise_only_breaks_trusted_models(table1_config):
    budget = total_budget(table1_config.model_copy(update={"xi_tot": 0.01}))
    detector = table1_config.detector

    conventional = added_noise(budget, detector, budget.t, ModelKind.CONVENTIONAL)
    assert conventional.chi_line == pytest.approx(1.0 / budget.t - 1.0 + 0.01, rel=1e-12)
    for model in (ModelKind.TRUSTED, ModelKind.ALL_ERROR_TRUSTED):
        with pytest.raises(InconsistentBudget):
            added_noise(budget, detector, budget.t, model)
