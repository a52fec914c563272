import pytest

from llo_qkd.core.attack import (
    added_noise_under_attack, attack_noise, attack_reference_intensity, conservative_trusted_noise,
)
from llo_qkd.core.const import ATTACKED_MONITORED_LABEL, INSECURE_DIAGNOSTIC_LABEL, ModelKind
from llo_qkd.core.exceptions import DomainError
from llo_qkd.core.keyrate import keyrate_from_added_noise, keyrate_pipeline
from llo_qkd.core.noise_budget import total_budget
from llo_qkd.core.noise_models import added_noise
from llo_qkd.core.params import fig2_config
from llo_qkd.models.schemas import AttackParams

ATTACK = AttackParams(alpha_std=0.2, alpha_low=0.14)
NULL_ATTACK = AttackParams(alpha_std=0.2, alpha_low=0.2)


def test_attack_params_order():
    with pytest.raises(ValueError):
        AttackParams(alpha_std=0.14, alpha_low=0.2)


def test_attack_reference_intensity():
    assert attack_reference_intensity(1000.0, NULL_ATTACK, 25.0) == 1000.0
    assert attack_reference_intensity(1000.0, ATTACK, 0.0) == 1000.0
    assert attack_reference_intensity(1000.0, ATTACK, 25.0) == pytest.approx(1412.54, rel=1e-5)


def test_attack_reference_intensity_rejects_negative_distance():
    with pytest.raises(DomainError):
        attack_reference_intensity(1000.0, ATTACK, -1.0)


def test_attack_noise():
    assert attack_noise(0.0136, NULL_ATTACK, 25.0) == 0.0
    assert attack_noise(0.0136, ATTACK, 25.0) == pytest.approx(0.0039718, rel=1e-4)
    assert attack_noise(0.0136, ATTACK, 1e4) == pytest.approx(0.0136, rel=1e-12)


def test_attack_noise_increasing():
    by_distance = [attack_noise(0.0136, ATTACK, d) for d in range(0, 41, 5)]
    assert all(a < b for a, b in zip(by_distance, by_distance[1:]))

    by_gap = [attack_noise(0.0136, AttackParams(alpha_std=0.2, alpha_low=low), 25.0) for low in (0.2, 0.18, 0.14, 0.1)]
    assert all(a < b for a, b in zip(by_gap, by_gap[1:]))


def test_null_attack_matches_trusted(fig2_config):
    budget = total_budget(fig2_config)
    trusted = added_noise(budget, fig2_config.detector, budget.t, ModelKind.TRUSTED)
    attacked = added_noise_under_attack(budget, fig2_config.detector, budget.t, NULL_ATTACK, 25.0)

    assert attacked.chi_line == pytest.approx(trusted.chi_line, rel=1e-12)
    assert attacked.chi_het == pytest.approx(trusted.chi_het, rel=1e-12)
    assert attacked.label == ATTACKED_MONITORED_LABEL


def test_monitored_attack_detection_noise(fig2_config):
    budget = total_budget(fig2_config)
    attacked = added_noise_under_attack(budget, fig2_config.detector, budget.t, ATTACK, 25.0)
    assert attacked.chi_het == pytest.approx(3.4 * (1 + 4.0 / 1412.54), rel=1e-6)


@pytest.mark.parametrize("distance", [0.0, 5.0, 17.0, 25.0, 40.0])
def test_attack_keeps_total_noise(distance):
    config = fig2_config(distance)
    budget = total_budget(config)
    plain = added_noise(budget, config.detector, budget.t, ModelKind.TRUSTED)
    attacked = added_noise_under_attack(budget, config.detector, budget.t, ATTACK, distance)
    assert attacked.chi_tot == pytest.approx(plain.chi_tot, rel=1e-12)


def test_unmonitored_attack_is_labelled(fig2_config):
    budget = total_budget(fig2_config)
    believed = added_noise_under_attack(budget, fig2_config.detector, budget.t, ATTACK, 25.0, monitored=False)
    secure = added_noise_under_attack(budget, fig2_config.detector, budget.t, ATTACK, 25.0, monitored=True)

    assert believed.label == INSECURE_DIAGNOSTIC_LABEL
    assert keyrate_from_added_noise(fig2_config, believed).k > keyrate_from_added_noise(fig2_config, secure).k


def test_attacked_rate_between_models(fig2_config):
    budget = total_budget(fig2_config)
    attacked = added_noise_under_attack(budget, fig2_config.detector, budget.t, ATTACK, 25.0)
    k_attacked = keyrate_from_added_noise(fig2_config, attacked).k

    assert keyrate_pipeline(fig2_config, ModelKind.CONVENTIONAL).k <= k_attacked
    assert k_attacked <= keyrate_pipeline(fig2_config, ModelKind.TRUSTED).k


def test_conservative_trusted_noise():
    assert conservative_trusted_noise(0.0136, 0.0) == 0.0136
    assert conservative_trusted_noise(0.0136, 0.1) == pytest.approx(0.0136 / 1.1)
    with pytest.raises(DomainError):
        conservative_trusted_noise(0.0136, -0.1)
