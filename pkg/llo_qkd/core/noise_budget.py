"""Phase-noise decomposition and the excess-noise budget.

Channel-input referred quantities are divided by T when they are built from
Bob-referred ones; ``xi_error_t`` is the only Bob-referred field of the budget.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from llo_qkd.core.const import PhaseNoiseMapping
from llo_qkd.core.exceptions import DomainError
from llo_qkd.core.params import transmittance
from llo_qkd.models.schemas import DetectorParams, NoiseBudget, PhaseVariance, ReferenceNoise, ScenarioConfig

_LOGGER = logging.getLogger(__name__)


def _check_transmittance(t: float) -> None:
    if not 0.0 < t <= 1.0:
        raise DomainError(f"Transmittance must lie in (0, 1], got {t}")


def _check_intensity(e_r2: float) -> None:
    if not e_r2 > 0.0:
        raise DomainError(f"Reference intensity must be positive, got {e_r2}")


def detection_noise(detector: DetectorParams) -> float:
    """Heterodyne detection added noise referred to Bob's input, (2 - eta + 2 v_el) / eta."""
    return (2.0 - detector.eta + 2.0 * detector.v_el) / detector.eta


def drift_variance(dnu_a: float, dnu_b: float, dt: float) -> float:
    """Relative phase drift between signal and reference at emission (rad²)."""
    if min(dnu_a, dnu_b, dt) < 0:
        raise DomainError("Linewidths and emission offset must be nonnegative")
    return 2.0 * math.pi * (dnu_a + dnu_b) * dt


def reference_noise(t: float, epsilon0: float, detector: DetectorParams) -> ReferenceNoise:
    """Total noise on the phase reference, split into untrusted and trusted parts."""
    _check_transmittance(t)
    chi_untrusted = 1.0 / t - 1.0 + epsilon0
    chi_trusted = detection_noise(detector)
    return ReferenceNoise(
        chi_total=chi_untrusted + chi_trusted / t,
        chi_untrusted=chi_untrusted,
        chi_trusted=chi_trusted,
        t=t,
    )


def error_variance(ref_noise: ReferenceNoise, e_r2_bob: float) -> float:
    """Variance of the reference phase estimate, (chi + 1) / E_R²."""
    _check_intensity(e_r2_bob)
    return (ref_noise.chi_total + 1.0) / e_r2_bob


def est_variance(v_drift: float, v_channel: float, v_error: float) -> PhaseVariance:
    return PhaseVariance(
        v_drift=v_drift,
        v_channel=v_channel,
        v_error=v_error,
        v_est=v_drift + v_channel + v_error,
    )


def phase_noise_exact(v_a: float, v_est: float) -> float:
    """Phase noise 2 V_A (1 - exp(-V_est / 2))."""
    return float(-2.0 * v_a * np.expm1(-v_est / 2.0))


def phase_noise_linear(v_a: float, v_est: float) -> float:
    """Small-angle phase noise V_A V_est."""
    return v_a * v_est


def phase_noise(v_a: float, v_est: float, mapping: PhaseNoiseMapping = PhaseNoiseMapping.LINEAR) -> float:
    if mapping == PhaseNoiseMapping.EXACT:
        return phase_noise_exact(v_a, v_est)
    return phase_noise_linear(v_a, v_est)


def error_noise_split(
    v_a: float,
    e_r2_bob: float,
    t: float,
    epsilon0: float,
    detector: DetectorParams,
) -> Tuple[float, float]:
    """
    Split the reference measurement noise into (untrusted, trusted).

    The untrusted part is channel-input referred, the trusted part Bob-referred,
    so that ``u + t_part / T`` is the full phase-reference measurement noise.
    """
    _check_transmittance(t)
    _check_intensity(e_r2_bob)
    xi_error_u = v_a * (1.0 + t * epsilon0) / (t * e_r2_bob)
    xi_error_t = v_a * detection_noise(detector) / e_r2_bob
    return xi_error_u, xi_error_t


def alice_reference_intensity(e_r2_bob: float, t: float, override: Optional[float] = None) -> float:
    """Reference intensity at Alice; channel loss only unless overridden."""
    _check_transmittance(t)
    if override is not None:
        return override
    return e_r2_bob / t


def modulation_noise(v_a: float, d_db: float) -> float:
    """Amplitude-modulator noise with E_Smax² = 10 V_A."""
    return 10.0 * v_a * 10.0 ** (-d_db / 10.0)


def leakage_noise(e_r2_alice: float, r_e_db: float, r_p_db: float) -> float:
    """Photon leakage from reference to signal; extinction ratios combine in dB."""
    return 2.0 * e_r2_alice * 10.0 ** (-(r_e_db + r_p_db) / 10.0)


def adc_noise(v_a: float, n_adc: int) -> float:
    """Quantization noise 10 V_A / (12 * 2^n), the bound taken with equality."""
    return math.ldexp(10.0 * v_a / 12.0, -n_adc)


def total_budget(config: ScenarioConfig) -> NoiseBudget:
    """
    Compose the full excess-noise budget for a scenario.

    With a measured ``xi_tot`` on the scenario the hardware terms are not
    modelled: the residual ``xi_tot - xi_phase`` is booked as ``xi0`` and may
    be negative. Consistency with the trusted split is checked by the trust models.
    """
    t = transmittance(config.channel)
    v_a = config.modulation.v_a
    ref = config.reference

    ref_noise = reference_noise(t, config.channel.epsilon0, config.detector)
    phase = est_variance(
        drift_variance(ref.dnu_a, ref.dnu_b, ref.dt),
        ref.v_channel,
        error_variance(ref_noise, ref.e_r2_bob),
    )
    xi_phase = phase_noise(v_a, phase.v_est, config.mapping)

    # Components are attributed in proportion to their share of V_est
    linear = phase_noise_linear(v_a, phase.v_est)
    scale = xi_phase / linear if linear > 0 else 0.0

    xi_error_u, xi_error_t = error_noise_split(v_a, ref.e_r2_bob, t, config.channel.epsilon0, config.detector)
    xi_error_u *= scale
    xi_error_t *= scale

    if config.xi_tot is not None:
        # Recorded as given; only the trusted split checks consistency
        xi_rest = config.xi_tot - xi_phase
        if xi_rest < 0:
            _LOGGER.debug(f"Measured xi_tot {config.xi_tot} is below the modelled phase noise {xi_phase:.6g}")
        xi0, xi_am, xi_le, xi_adc = xi_rest, 0.0, 0.0, 0.0
        xi_tot = config.xi_tot
    else:
        xi0 = config.hardware.xi0
        xi_am = modulation_noise(v_a, config.hardware.d_db)
        xi_le = leakage_noise(
            alice_reference_intensity(ref.e_r2_bob, t, ref.e_r2_alice_override),
            config.hardware.r_e_db,
            config.hardware.r_p_db,
        )
        xi_adc = adc_noise(v_a, config.hardware.n_adc)
        xi_rest = xi0 + xi_am + xi_le + xi_adc
        xi_tot = xi_rest + xi_phase

    budget = NoiseBudget(
        xi0=xi0,
        xi_am=xi_am,
        xi_le=xi_le,
        xi_adc=xi_adc,
        xi_rest=xi_rest,
        xi_drift=v_a * phase.v_drift * scale,
        xi_channel=v_a * phase.v_channel * scale,
        xi_error=v_a * phase.v_error * scale,
        xi_error_u=xi_error_u,
        xi_error_t=xi_error_t,
        xi_phase=xi_phase,
        xi_tot=xi_tot,
        t=t,
        mapping=config.mapping,
        measured=config.xi_tot is not None,
        phase=phase,
        reference=ref_noise,
    )
    _LOGGER.debug(
        f"Budget at {config.channel.distance_km} km: xi_rest={budget.xi_rest:.6g}, "
        f"xi_phase={budget.xi_phase:.6g}, xi_tot={budget.xi_tot:.6g}"
    )
    return budget


def trusted_phase_fraction(budget: NoiseBudget) -> float:
    """Channel-referred trusted phase noise as a fraction of xi_tot."""
    if budget.xi_tot == 0:
        return 0.0
    return budget.xi_error_t / budget.t / budget.xi_tot
