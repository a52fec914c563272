"""Asymptotic secret key rate under collective attacks, reverse reconciliation, heterodyne detection."""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect
from scipy.special import xlogy

from llo_qkd.config import settings
from llo_qkd.core.attack import conservative_budget
from llo_qkd.core.const import EIGENVALUE_FLOOR_TOL, EIGENVALUE_REPORT_TOL, RADICAND_CLAMP_TOL, ModelKind
from llo_qkd.core.exceptions import DomainError, InconsistentBudget, NonPhysical
from llo_qkd.core.noise_budget import total_budget
from llo_qkd.core.noise_models import added_noise
from llo_qkd.models.schemas import AddedNoise, KeyRateBreakdown, ScenarioConfig

_LOGGER = logging.getLogger(__name__)

Eigenvalues = Tuple[float, float, float, float, float]


def g_entropy(x: float) -> float:
    """Bosonic entropy (x+1) log2(x+1) - x log2(x), with 0 log 0 = 0."""
    if x < 0:
        raise DomainError(f"Entropy argument must be nonnegative, got {x}")
    return float((xlogy(x + 1.0, x + 1.0) - xlogy(x, x)) / math.log(2.0))


def mutual_information(v: float, chi_tot: float) -> float:
    """Alice-Bob mutual information for heterodyne detection (bits/pulse)."""
    return float(np.log2((v + chi_tot) / (1.0 + chi_tot)))


def _root(radicand: float, scale: float, name: str) -> float:
    if radicand >= 0:
        return math.sqrt(radicand)
    if radicand < -RADICAND_CLAMP_TOL * max(1.0, scale):
        raise NonPhysical(f"Negative radicand {radicand:.3g} in {name}")
    _LOGGER.warning(f"Clamped radicand {radicand:.3g} in {name} to zero")
    return 0.0


def _eigenvalue(square: float, name: str) -> float:
    value = math.sqrt(max(square, 0.0))
    if value < 1.0:
        if value < 1.0 - EIGENVALUE_FLOOR_TOL:
            raise NonPhysical(f"Symplectic eigenvalue {name} = {value:.9g} below 1")
        value = 1.0
    return value


def symplectic_eigenvalues(v: float, t: float, chi_line: float, chi_het: float, chi_tot: float) -> Eigenvalues:
    """
    Symplectic spectrum of Eve's and the conditional state.

    Raises:
        NonPhysical: a radicand is negative beyond rounding or an eigenvalue falls below 1
    """
    if not 0.0 < t <= 1.0:
        raise DomainError(f"Transmittance must lie in (0, 1], got {t}")
    if not v > 1.0:
        raise DomainError(f"V = V_A + 1 must exceed 1, got {v}")

    a = v ** 2 * (1.0 - 2.0 * t) + 2.0 * t + t ** 2 * (v + chi_line) ** 2
    b = t ** 2 * (v * chi_line + 1.0) ** 2
    sqrt_b = math.sqrt(b)
    norm = (t * (v + chi_tot)) ** 2
    c = (
        a * chi_het ** 2 + b + 1.0
        + 2.0 * chi_het * (v * sqrt_b + t * (v + chi_line))
        + 2.0 * t * (v ** 2 - 1.0)
    ) / norm
    d = (v + sqrt_b * chi_het) ** 2 / norm

    root_ab = _root(a ** 2 - 4.0 * b, a ** 2, "lambda_1,2")
    root_cd = _root(c ** 2 - 4.0 * d, c ** 2, "lambda_3,4")

    return (
        _eigenvalue((a + root_ab) / 2.0, "lambda_1"),
        _eigenvalue((a - root_ab) / 2.0, "lambda_2"),
        _eigenvalue((c + root_cd) / 2.0, "lambda_3"),
        _eigenvalue((c - root_cd) / 2.0, "lambda_4"),
        1.0,
    )


def holevo_bound(lambdas: Sequence[float]) -> float:
    """Holevo information between Eve and Bob from the five symplectic eigenvalues."""
    if len(lambdas) != 5:
        raise DomainError(f"Expected 5 symplectic eigenvalues, got {len(lambdas)}")
    for value in lambdas:
        if value < 1.0 - EIGENVALUE_REPORT_TOL:
            raise DomainError(f"Symplectic eigenvalue {value} below 1")
    terms = [g_entropy(max((value - 1.0) / 2.0, 0.0)) for value in lambdas]
    return terms[0] + terms[1] - terms[2] - terms[3] - terms[4]


def secret_key_rate(beta: float, i_ab: float, chi_be: float) -> float:
    """K = beta I_AB - chi_BE (bits/pulse); negative values are kept."""
    return beta * i_ab - chi_be


def keyrate_from_added_noise(config: ScenarioConfig, added: AddedNoise) -> KeyRateBreakdown:
    """Key rate for precomputed added noises."""
    v = config.modulation.v_a + 1.0
    i_ab = mutual_information(v, added.chi_tot)
    lambdas = symplectic_eigenvalues(v, added.t_used, added.chi_line, added.chi_het, added.chi_tot)
    chi_be = holevo_bound(lambdas)
    k = secret_key_rate(config.modulation.beta, i_ab, chi_be)
    return KeyRateBreakdown(
        i_ab=i_ab,
        lambdas=lambdas,
        chi_be=chi_be,
        k=k,
        key=config.modulation.f_rep * k if k > 0 else 0.0,
        model=added.model,
        added=added,
    )


def keyrate_pipeline(
    config: ScenarioConfig,
    model: Optional[ModelKind] = None,
    fluctuation: float = 0.0,
) -> KeyRateBreakdown:
    """
    Transmittance, budget, added noise, Holevo bound and throughput for one scenario.

    ``fluctuation`` calibrates the trusted noise at E_R² (1 + fluctuation), which
    gives a lower bound on the trusted key rate under intensity fluctuations.
    """
    model = model or config.model
    budget = conservative_budget(total_budget(config), fluctuation)
    added = added_noise(budget, config.detector, budget.t, model)
    result = keyrate_from_added_noise(config, added)
    _LOGGER.debug(
        f"{model.value} at {config.channel.distance_km} km: K={result.k:.6g} bits/pulse, "
        f"Key={result.key:.6g} bit/s"
    )
    return result


def certified_k(config: ScenarioConfig, model: ModelKind, distance_km: float, fluctuation: float = 0.0) -> float:
    """K at a distance; -1 where a measured xi_tot cannot host the model's trusted noise."""
    try:
        return keyrate_pipeline(config.at_distance(distance_km), model, fluctuation).k
    except InconsistentBudget:
        return -1.0


def zero_crossing(
    k_of_distance: Callable[[float], float],
    lo_km: float,
    hi_km: float,
    tol_km: Optional[float] = None,
) -> float:
    """
    Bisect the distance where K changes sign inside a bracket with K(lo) > 0 >= K(hi).

    Raises:
        DomainError: the bracket does not straddle the crossing
    """
    tol_km = tol_km if tol_km is not None else settings.MAX_DISTANCE_TOL_KM
    k_lo = k_of_distance(lo_km)
    k_hi = k_of_distance(hi_km)
    if not (k_lo > 0 >= k_hi):
        raise DomainError(f"No key-rate sign change between {lo_km} and {hi_km} km")
    if k_hi == 0:
        return hi_km
    return float(bisect(k_of_distance, lo_km, hi_km, xtol=tol_km))


def first_crossing(
    k_of_distance: Callable[[float], float],
    distances: Sequence[float],
    known: Optional[Sequence[float]] = None,
    tol_km: Optional[float] = None,
) -> Optional[float]:
    """
    Zero crossing inside the first grid interval where K stops being positive.

    ``known`` holds K already evaluated on the grid; NaN counts as no key.
    Returns None when no interval brackets a crossing.
    """
    def k_at(i: int) -> float:
        return known[i] if known is not None else k_of_distance(distances[i])

    if not distances:
        return None
    k_prev = k_at(0)
    for i in range(1, len(distances)):
        k_curr = k_at(i)
        if k_prev > 0 and not k_curr > 0:
            return zero_crossing(k_of_distance, distances[i - 1], distances[i], tol_km)
        k_prev = k_curr
    return None


def max_distance(
    config: ScenarioConfig,
    model: ModelKind,
    lo_km: float = 0.0,
    hi_km: float = 300.0,
    tol_km: Optional[float] = None,
    step_km: float = 1.0,
    fluctuation: float = 0.0,
) -> Optional[float]:
    """
    Maximum distance of a trust model inside [lo_km, hi_km].

    Scans in ``step_km`` strides for the first point without key, then bisects.
    Returns None when K does not change sign in range.
    """
    def k_of_distance(d: float) -> float:
        return certified_k(config, model, d, fluctuation)

    if not k_of_distance(lo_km) > 0:
        _LOGGER.warning(f"No key for {model.value} at {lo_km} km")
        return None
    count = int((hi_km - lo_km) / step_km + 1e-9)
    grid = [lo_km + i * step_km for i in range(count + 1)]
    if grid[-1] < hi_km:
        grid.append(hi_km)

    found = first_crossing(k_of_distance, grid, tol_km=tol_km)
    if found is None:
        _LOGGER.warning(f"{model.value} still has key at {hi_km} km")
    return found
