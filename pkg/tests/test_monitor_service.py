import pytest

from llo_qkd.core.exceptions import DomainError
from llo_qkd.models.schemas import AttackParams
from llo_qkd.services.monitor_service import IntensityMonitor, intensity_alarm


def test_within_threshold():
    alarm = intensity_alarm(1050.0, 1000.0)
    assert not alarm.triggered
    assert alarm.relative_deviation == pytest.approx(0.05)
    assert alarm.threshold == 0.10


def test_brighter_reference_triggers_stop():
    alarm = IntensityMonitor(1000.0).check(1200.0)
    assert alarm.triggered
    assert "above threshold" in alarm.message
    assert "stop the QKD" in alarm.message


def test_dimmer_reference_triggers_recalibration():
    alarm = IntensityMonitor(1000.0, threshold=0.05).check(900.0)
    assert alarm.triggered
    assert "below threshold" in alarm.message


def test_attack_reading():
    monitor = IntensityMonitor(1000.0)
    attack = AttackParams(alpha_std=0.2, alpha_low=0.14)

    assert monitor.check_attack(attack, 25.0).observed_e_r2 == pytest.approx(1412.54, rel=1e-5)
    assert monitor.check_attack(attack, 25.0).triggered
    # 0.06 dB gain stays under a 10% threshold
    assert not monitor.check_attack(attack, 1.0).triggered


def test_calibration_must_be_positive():
    with pytest.raises(DomainError):
        IntensityMonitor(0.0)
