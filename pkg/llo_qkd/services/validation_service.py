"""Monte Carlo oracle table for the analytic noise formulas."""

import logging
from typing import List, Optional

from llo_qkd.config import settings
from llo_qkd.core.exceptions import DomainError
from llo_qkd.core.montecarlo import (
    reference_phase_variance_exact,
    simulate_compensated_protocol,
    simulate_phase_noise_penalty,
    simulate_reference_phase_estimation,
)
from llo_qkd.core.noise_budget import error_variance, phase_noise_exact, reference_noise, total_budget
from llo_qkd.models.schemas import McResult, OracleCheck, ScenarioConfig

_LOGGER = logging.getLogger(__name__)


class ValidationService:
    """Runs the seeded oracles and compares them with their analytic counterparts."""

    @staticmethod
    def compare(
        quantity: str,
        analytic: float,
        result: McResult,
        sigma: Optional[float] = None,
        note: Optional[str] = None,
    ) -> OracleCheck:
        sigma = sigma if sigma is not None else settings.ORACLE_SIGMA
        passed = abs(result.estimate - analytic) <= sigma * result.std_error
        check = OracleCheck(
            quantity=quantity,
            analytic=analytic,
            empirical=result.estimate,
            std_error=result.std_error,
            sigma=sigma,
            passed=passed,
            note=note,
        )
        if not passed:
            _LOGGER.warning(
                f"Oracle {quantity} failed: {result.estimate:.6g} vs {analytic:.6g} "
                f"({check.deviation_sigma:.1f} standard errors)"
            )
        return check

    @staticmethod
    def reference_oracle(
        e_r2_bob: float,
        chi: float,
        samples: int,
        seed: int,
        workers: Optional[int] = None,
    ) -> OracleCheck:
        """Arctangent phase estimator against the exact variance; the first-order value is reported."""
        result = simulate_reference_phase_estimation(e_r2_bob, chi, samples, seed, workers=workers)
        exact = reference_phase_variance_exact(e_r2_bob, chi)
        first_order = (chi + 1.0) / e_r2_bob
        bias = result.estimate / first_order - 1.0
        note = f"first order (chi+1)/E_R^2 = {first_order:.6g}, relative bias {bias:+.3%}"
        return ValidationService.compare("reference_phase_variance", exact, result, note=note)

    @staticmethod
    def run_oracles(
        config: ScenarioConfig,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> List[OracleCheck]:
        """
        Three oracles at the scenario's operating point.

        Raises:
            DomainError: fewer than MC_MIN_SAMPLES samples requested
        """
        samples = samples if samples is not None else settings.MC_DEFAULT_SAMPLES
        seed = seed if seed is not None else settings.CVQKD_SEED
        if samples < settings.MC_MIN_SAMPLES:
            raise DomainError(f"At least {settings.MC_MIN_SAMPLES} samples required, got {samples}")

        budget = total_budget(config)
        v_a = config.modulation.v_a
        v_est = budget.phase.v_est
        ref_noise = reference_noise(budget.t, config.channel.epsilon0, config.detector)
        analytic = phase_noise_exact(v_a, v_est)
        protocol_samples = max(samples, settings.MC_MIN_PROTOCOL_SAMPLES)
        if protocol_samples > samples:
            _LOGGER.warning(f"Protocol oracle needs {protocol_samples} samples; raised from {samples}")

        checks = [
            ValidationService.reference_oracle(
                config.reference.e_r2_bob, ref_noise.chi_total, samples, seed, workers
            ),
            ValidationService.compare(
                "phase_noise_penalty",
                analytic,
                simulate_phase_noise_penalty(v_a, v_est, samples, seed, workers=workers),
                note=f"V_est = {v_est:.6g} rad^2, linear value {v_a * v_est:.6g}",
            ),
            ValidationService.compare(
                "compensated_protocol",
                analytic,
                simulate_compensated_protocol(
                    config, protocol_samples, seed, workers=workers
                ),
                note=(
                    f"V_error = {error_variance(ref_noise, config.reference.e_r2_bob):.6g} rad^2, "
                    f"{protocol_samples} samples"
                ),
            ),
        ]
        _LOGGER.info(f"Oracles: {sum(c.passed for c in checks)}/{len(checks)} passed with seed {seed}")
        return checks
