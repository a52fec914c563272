"""Added noises under the conventional, trusted and all-error-trusted models."""

import logging

from llo_qkd.core.const import ModelKind
from llo_qkd.core.exceptions import DomainError, InconsistentBudget
from llo_qkd.core.noise_budget import detection_noise
from llo_qkd.models.schemas import AddedNoise, DetectorParams, NoiseBudget

_LOGGER = logging.getLogger(__name__)


def trusted_excess_noise(xi_tot: float, xi_error_t: float, t: float) -> float:
    """
    Real excess noise once the trusted reference noise is removed.

    Raises:
        InconsistentBudget: the trusted part, referred to the channel input, exceeds xi_tot
    """
    if not 0.0 < t <= 1.0:
        raise DomainError(f"Transmittance must lie in (0, 1], got {t}")
    trusted = xi_error_t / t
    if xi_tot - trusted < -1e-12 * max(1.0, xi_tot):
        raise InconsistentBudget(
            f"Trusted phase noise {trusted:.6g} exceeds the total excess noise {xi_tot:.6g}"
        )
    return max(xi_tot - trusted, 0.0)


def added_noise(budget: NoiseBudget, detector: DetectorParams, t: float, model: ModelKind) -> AddedNoise:
    """Channel-referred line noise and Bob-referred detection noise for a trust model."""
    if not 0.0 < t <= 1.0:
        raise DomainError(f"Transmittance must lie in (0, 1], got {t}")
    loss = 1.0 / t - 1.0
    chi_het = detection_noise(detector)

    if model == ModelKind.CONVENTIONAL:
        chi_line = loss + budget.xi_tot
    elif model == ModelKind.TRUSTED:
        chi_line = loss + trusted_excess_noise(budget.xi_tot, budget.xi_error_t, t)
        chi_het += budget.xi_error_t
    elif model == ModelKind.ALL_ERROR_TRUSTED:
        # The whole reference measurement noise moves into the detector
        moved = t * budget.xi_error_u + budget.xi_error_t
        chi_line = loss + trusted_excess_noise(budget.xi_tot, moved, t)
        chi_het += moved
    else:
        raise ValueError(f"Unknown model {model}")

    return AddedNoise(
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / t,
        model=model,
        t_used=t,
    )
