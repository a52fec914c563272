"""Real-time phase-reference intensity monitor."""

import logging
from typing import Optional

from llo_qkd.config import settings
from llo_qkd.core.attack import attack_reference_intensity
from llo_qkd.core.exceptions import DomainError
from llo_qkd.models.schemas import AttackParams, IntensityAlarm

_LOGGER = logging.getLogger(__name__)


class IntensityMonitor:
    """
    Compares the observed reference intensity at Bob with its calibration.

    The alarm is advisory: it tells the operator to stop the run, it does not
    stop anything itself.
    """

    def __init__(self, calibrated_e_r2: float, threshold: Optional[float] = None):
        if calibrated_e_r2 <= 0:
            raise DomainError(f"Calibrated intensity must be positive, got {calibrated_e_r2}")
        self.calibrated_e_r2 = calibrated_e_r2
        self.threshold = threshold if threshold is not None else settings.INTENSITY_ALARM_THRESHOLD

    def check(self, observed_e_r2: float) -> IntensityAlarm:
        """Check one intensity reading against the calibrated value."""
        deviation = (observed_e_r2 - self.calibrated_e_r2) / self.calibrated_e_r2
        triggered = abs(deviation) > self.threshold

        if not triggered:
            message = f"Reference intensity {observed_e_r2:.6g} within {self.threshold:.0%} of calibration"
        elif deviation > 0:
            message = (
                f"Reference intensity {observed_e_r2:.6g} > {self.calibrated_e_r2:.6g} "
                f"by {deviation:.1%} (above threshold): detect the attack and stop the QKD"
            )
        else:
            message = (
                f"Reference intensity {observed_e_r2:.6g} < {self.calibrated_e_r2:.6g} "
                f"by {-deviation:.1%} (below threshold): recalibrate the trusted noise"
            )

        if triggered:
            _LOGGER.warning(message)

        return IntensityAlarm(
            observed_e_r2=observed_e_r2,
            calibrated_e_r2=self.calibrated_e_r2,
            relative_deviation=deviation,
            threshold=self.threshold,
            triggered=triggered,
            message=message,
        )

    def check_attack(self, atk: AttackParams, distance_km: float) -> IntensityAlarm:
        """Reading the monitor would produce while the fiber-swap attack runs."""
        return self.check(attack_reference_intensity(self.calibrated_e_r2, atk, distance_km))


def intensity_alarm(observed_e_r2: float, calibrated_e_r2: float, threshold: Optional[float] = None) -> IntensityAlarm:
    return IntensityMonitor(calibrated_e_r2, threshold).check(observed_e_r2)
