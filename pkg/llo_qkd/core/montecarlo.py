"""Seeded sample-level oracles for the analytic noise formulas.

Random numbers come from numpy's Philox4x64-10 counter-based generator; each
partition ``i`` of a run is keyed by ``SeedSequence([seed, i])`` and Gaussian
variates use numpy's ziggurat sampler. Per-sample values are concatenated in
partition order, so for a fixed partition plan the result does not depend on
the number of workers.
"""

import logging
import math
from typing import Callable, List, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from llo_qkd.config import settings
from llo_qkd.core.exceptions import DomainError
from llo_qkd.core.noise_budget import drift_variance, reference_noise
from llo_qkd.core.params import transmittance
from llo_qkd.models.schemas import McResult, ScenarioConfig
from llo_qkd.utils.parallel import ordered_map

_LOGGER = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator, int], np.ndarray]


def generator(seed: int, partition: int = 0) -> np.random.Generator:
    """Philox stream for one partition of a seeded run."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, partition])))


def partition_sizes(n: int, partitions: int) -> List[int]:
    partitions = max(1, min(partitions, n))
    base, extra = divmod(n, partitions)
    return [base + 1] * extra + [base] * (partitions - extra)


def wrap_phase(angle: np.ndarray) -> np.ndarray:
    """Wrap angles to (-pi, pi]."""
    return np.pi - np.mod(np.pi - angle, 2.0 * np.pi)


def _draw(sampler: Sampler, n: int, seed: int, partitions: Optional[int], workers: Optional[int]) -> np.ndarray:
    sizes = partition_sizes(n, partitions or settings.MC_PARTITIONS)
    chunks = ordered_map(
        lambda item: sampler(generator(seed, item[0]), item[1]),
        list(enumerate(sizes)),
        workers or settings.MC_WORKERS,
    )
    return np.concatenate(chunks)


def _check_samples(n: int, minimum: int) -> None:
    if n < minimum:
        raise DomainError(f"At least {minimum} samples required, got {n}")


def _mean_result(values: np.ndarray, seed: int) -> McResult:
    return McResult(
        estimate=float(np.mean(values)),
        std_error=float(np.std(values, ddof=1) / math.sqrt(values.size)),
        n_samples=int(values.size),
        seed=seed,
    )


def _jackknife_variance(values: np.ndarray, groups: int) -> float:
    """Grouped (delete-one-block) jackknife standard error of the variance."""
    groups = max(2, min(groups, values.size))
    blocks = np.array_split(values, groups)
    counts = np.array([b.size for b in blocks], dtype=float)
    s1 = np.array([b.sum() for b in blocks])
    s2 = np.array([np.square(b).sum() for b in blocks])

    n_loo = counts.sum() - counts
    mean_loo = (s1.sum() - s1) / n_loo
    var_loo = (s2.sum() - s2) / n_loo - mean_loo ** 2
    return float(math.sqrt((groups - 1) / groups * np.sum((var_loo - var_loo.mean()) ** 2)))


def measure_reference_phase(rng: np.random.Generator, theta: np.ndarray, e_r2_bob: float, chi: float) -> np.ndarray:
    """Heterodyne the reference at true phase ``theta`` and return the arctangent estimate."""
    amplitude = math.sqrt(e_r2_bob)
    sigma = math.sqrt(chi + 1.0)
    x = amplitude * np.cos(theta) + rng.normal(0.0, sigma, theta.size)
    p = amplitude * np.sin(theta) + rng.normal(0.0, sigma, theta.size)
    return np.arctan2(p, x)


def reference_phase_variance_exact(e_r2_bob: float, chi: float) -> float:
    """
    Exact E[(theta_hat - theta)²] of the wrapped arctangent estimator.

    Integrates the phase density of a phasor in circular Gaussian noise
    (per-quadrature variance chi + 1). Approaches (chi + 1) / E_R² from above.
    """
    if e_r2_bob <= 0 or chi < 0:
        raise DomainError("Reference intensity must be positive and chi nonnegative")
    rho = e_r2_bob / (2.0 * (chi + 1.0))
    sqrt_rho = math.sqrt(rho)

    def coherent_part(phi: float) -> float:
        c = math.cos(phi)
        return phi * phi * 0.5 * math.sqrt(rho / math.pi) * c * math.exp(-rho * math.sin(phi) ** 2) * erfc(-sqrt_rho * c)

    # Outside 40 standard deviations the coherent part is below exp(-800)
    upper = min(math.pi, 40.0 / math.sqrt(2.0 * rho))
    integral, _ = quad(coherent_part, 0.0, upper, limit=400, epsabs=1e-14, epsrel=1e-10)
    uniform_part = math.exp(-rho) * math.pi ** 2 / 3.0
    return uniform_part + 2.0 * integral


def simulate_reference_phase_estimation(
    e_r2_bob: float,
    chi: float,
    n: int,
    seed: int,
    partitions: Optional[int] = None,
    workers: Optional[int] = None,
) -> McResult:
    """Circular variance of the reference phase estimate, with jackknife standard error."""
    _check_samples(n, settings.MC_MIN_SAMPLES)
    if e_r2_bob <= 0 or chi < 0:
        raise DomainError("Reference intensity must be positive and chi nonnegative")

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        theta = rng.uniform(-np.pi, np.pi, size)
        return wrap_phase(measure_reference_phase(rng, theta, e_r2_bob, chi) - theta)

    errors = _draw(sampler, n, seed, partitions, workers)
    result = McResult(
        estimate=float(np.var(errors)),
        std_error=_jackknife_variance(errors, settings.MC_JACKKNIFE_GROUPS),
        n_samples=n,
        seed=seed,
    )
    _LOGGER.info(f"Reference phase variance at E_R²={e_r2_bob:g}: {result.estimate:.6g} ± {result.std_error:.2g}")
    return result


def simulate_phase_noise_penalty(
    v_a: float,
    v_est: float,
    n: int,
    seed: int,
    partitions: Optional[int] = None,
    workers: Optional[int] = None,
) -> McResult:
    """Excess noise from a Gaussian phase error on a unit channel with unit efficiency."""
    _check_samples(n, settings.MC_MIN_SAMPLES)
    if v_a <= 0 or v_est < 0:
        raise DomainError("V_A must be positive and V_est nonnegative")

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        x_a = rng.normal(0.0, math.sqrt(v_a), size)
        p_a = rng.normal(0.0, math.sqrt(v_a), size)
        delta = rng.normal(0.0, math.sqrt(v_est), size)
        measured = x_a * np.cos(delta) + p_a * np.sin(delta) + rng.standard_normal(size)
        return np.square(measured - x_a) - 1.0

    result = _mean_result(_draw(sampler, n, seed, partitions, workers), seed)
    _LOGGER.info(f"Phase noise penalty at V_est={v_est:g}: {result.estimate:.6g} ± {result.std_error:.2g}")
    return result


def simulate_compensated_protocol(
    config: ScenarioConfig,
    n: int,
    seed: int,
    partitions: Optional[int] = None,
    workers: Optional[int] = None,
) -> McResult:
    """
    Channel-referred excess noise after reference-based phase compensation.

    The signal sees the reference phase plus a Gaussian drift of variance
    V_drift + V_channel; everything else is vacuum and electronic noise.
    """
    _check_samples(n, settings.MC_MIN_PROTOCOL_SAMPLES)
    t = transmittance(config.channel)
    eta = config.detector.eta
    v_el = config.detector.v_el
    v_a = config.modulation.v_a
    ref = config.reference
    chi = reference_noise(t, config.channel.epsilon0, config.detector).chi_total
    drift = drift_variance(ref.dnu_a, ref.dnu_b, ref.dt) + ref.v_channel
    gain = math.sqrt(t * eta / 2.0)
    noise_var = 1.0 + v_el

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        x_a = rng.normal(0.0, math.sqrt(v_a), size)
        p_a = rng.normal(0.0, math.sqrt(v_a), size)
        theta_r = rng.uniform(-np.pi, np.pi, size)
        theta_s = theta_r + rng.normal(0.0, math.sqrt(drift), size) if drift > 0 else theta_r

        x_b = gain * (x_a * np.cos(theta_s) + p_a * np.sin(theta_s)) + rng.normal(0.0, math.sqrt(noise_var), size)
        p_b = gain * (-x_a * np.sin(theta_s) + p_a * np.cos(theta_s)) + rng.normal(0.0, math.sqrt(noise_var), size)

        # Alice rotates her data by the estimated reference phase
        theta_hat = measure_reference_phase(rng, theta_r, ref.e_r2_bob, chi)
        x_pred = gain * (x_a * np.cos(theta_hat) + p_a * np.sin(theta_hat))
        p_pred = gain * (-x_a * np.sin(theta_hat) + p_a * np.cos(theta_hat))

        residual = (np.square(x_b - x_pred) + np.square(p_b - p_pred)) / 2.0
        return (residual - noise_var) * 2.0 / (t * eta)

    result = _mean_result(_draw(sampler, n, seed, partitions, workers), seed)
    _LOGGER.info(
        f"Compensated protocol at {config.channel.distance_km} km: "
        f"xi={result.estimate:.6g} ± {result.std_error:.2g}"
    )
    return result
