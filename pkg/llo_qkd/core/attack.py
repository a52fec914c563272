"""Phase-reference intensity attack and the real-time monitoring countermeasure.

Eve carries the reference over ultralow-loss fiber, so Bob receives a brighter
reference and (if he does not monitor it) overestimates the trusted part of the
phase noise. She spends the difference on extra noise on the signal.
"""

import logging
import math

import numpy as np

from llo_qkd.core.const import ATTACKED_MONITORED_LABEL, INSECURE_DIAGNOSTIC_LABEL, ModelKind
from llo_qkd.core.exceptions import DomainError
from llo_qkd.core.noise_budget import detection_noise
from llo_qkd.core.noise_models import added_noise, trusted_excess_noise
from llo_qkd.models.schemas import AddedNoise, AttackParams, DetectorParams, NoiseBudget

_LOGGER = logging.getLogger(__name__)


def _loss_gain_db(atk: AttackParams, distance_km: float) -> float:
    if distance_km < 0:
        raise DomainError(f"Distance must be nonnegative, got {distance_km}")
    return (atk.alpha_std - atk.alpha_low) * distance_km


def attack_reference_intensity(e_r2_bob: float, atk: AttackParams, distance_km: float) -> float:
    """Reference intensity Bob receives when the reference travels on the low-loss fiber."""
    return e_r2_bob * 10.0 ** (_loss_gain_db(atk, distance_km) / 10.0)


def attack_noise(xi_error_t: float, atk: AttackParams, distance_km: float) -> float:
    """Reduction of the trusted noise that Eve converts into signal noise."""
    if xi_error_t < 0:
        raise DomainError(f"Trusted noise must be nonnegative, got {xi_error_t}")
    gain = _loss_gain_db(atk, distance_km)
    return float(-xi_error_t * np.expm1(-math.log(10.0) * gain / 10.0))


def added_noise_under_attack(
    budget: NoiseBudget,
    detector: DetectorParams,
    t: float,
    atk: AttackParams,
    distance_km: float,
    monitored: bool = True,
) -> AddedNoise:
    """
    Trusted-model added noise while the reference intensity attack is running.

    Monitored: Bob recalibrates the trusted part from the attacked intensity, so
    Eve's gain shows up as untrusted line noise and chi_tot stays unchanged.
    Unmonitored: Bob keeps the stale calibration; the returned value is what he
    believes, which overstates the key, and is labelled accordingly.
    """
    if not monitored:
        believed = added_noise(budget, detector, t, ModelKind.TRUSTED)
        return believed.model_copy(update={"label": INSECURE_DIAGNOSTIC_LABEL})

    xi_attack = attack_noise(budget.xi_error_t, atk, distance_km)
    chi_line = 1.0 / t - 1.0 + trusted_excess_noise(budget.xi_tot, budget.xi_error_t, t) + xi_attack / t
    chi_het = detection_noise(detector) + budget.xi_error_t - xi_attack
    _LOGGER.debug(f"Attack at {distance_km} km shifts {xi_attack:.6g} SNU from detector to line")

    return AddedNoise(
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / t,
        model=ModelKind.TRUSTED,
        t_used=t,
        label=ATTACKED_MONITORED_LABEL,
    )


def conservative_trusted_noise(xi_error_t: float, fluctuation: float) -> float:
    """
    Trusted noise calibrated at the upper bound E_R² (1 + fluctuation) of the
    observed intensity; never larger than the nominal value.
    """
    if fluctuation < 0:
        raise DomainError(f"Fluctuation bound must be nonnegative, got {fluctuation}")
    return xi_error_t / (1.0 + fluctuation)


def conservative_budget(budget: NoiseBudget, fluctuation: float) -> NoiseBudget:
    """
    Budget with the trusted part calibrated at the fluctuation upper bound.

    The removed trusted noise is booked as untrusted, so ``xi_error`` and
    ``xi_tot`` are unchanged and only the trusted model's key rate drops.
    """
    if fluctuation == 0:
        return budget
    xi_error_t = conservative_trusted_noise(budget.xi_error_t, fluctuation)
    moved = budget.xi_error_t - xi_error_t
    _LOGGER.debug(f"Fluctuation bound {fluctuation:g} moves {moved:.6g} SNU out of the trusted part")
    return budget.model_copy(
        update={"xi_error_t": xi_error_t, "xi_error_u": budget.xi_error_u + moved / budget.t}
    )
