"""Pydantic schemas for scenarios, noise terms and results.

All noise variances are in shot-noise units (vacuum quadrature variance 1),
phase variances in rad², reference intensities in mean photon number,
distances in km and attenuation in dB/km.
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from llo_qkd.core.const import ALPHA_LOW_DB_PER_KM, ALPHA_STD_DB_PER_KM, ModelKind, PhaseNoiseMapping


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Violation(_Frozen):
    """A broken invariant, named by field."""
    field: str
    rule: str


# Scenario schemas
class ChannelParams(_Frozen):
    """Fiber channel."""
    alpha_db_per_km: float = Field(..., ge=0, description="Attenuation coefficient (dB/km)")
    distance_km: float = Field(..., ge=0, description="Fiber length (km)")
    epsilon0: float = Field(..., ge=0, description="Channel excess noise on the phase reference (SNU)")


class DetectorParams(_Frozen):
    """Bob's heterodyne detector."""
    eta: float = Field(..., gt=0, le=1, description="Detection efficiency")
    v_el: float = Field(..., ge=0, description="Electronic noise (SNU)")


class ModulationParams(_Frozen):
    """Gaussian modulation and post-processing."""
    v_a: float = Field(..., gt=0, description="Modulation variance (SNU)")
    f_rep: float = Field(..., gt=0, description="Pulse repetition rate (Hz)")
    beta: float = Field(..., gt=0, le=1, description="Reconciliation efficiency")


class PhaseRefParams(_Frozen):
    """Phase reference and the two free-running lasers."""
    e_r2_bob: float = Field(..., gt=0, description="Reference mean photon number at Bob")
    e_r2_alice_override: Optional[float] = Field(None, gt=0, description="Reference intensity at Alice")
    dnu_a: float = Field(..., ge=0, description="Alice laser linewidth (Hz)")
    dnu_b: float = Field(..., ge=0, description="Bob laser linewidth (Hz)")
    dt: float = Field(..., ge=0, description="|t_R - t_S| emission offset (s)")
    v_channel: float = Field(..., ge=0, description="Propagation phase-accumulation variance (rad²)")


class HardwareParams(_Frozen):
    """Transmitter and digitizer imperfections."""
    xi0: float = Field(..., ge=0, description="System excess noise (SNU)")
    d_db: float = Field(..., gt=0, description="Amplitude-modulator dynamics (dB)")
    n_adc: int = Field(..., ge=1, description="ADC bits")
    r_e_db: float = Field(..., gt=0, description="Amplitude-modulator extinction ratio (dB)")
    r_p_db: float = Field(..., gt=0, description="Polarization-multiplexing extinction ratio (dB)")


class ScenarioConfig(_Frozen):
    """Complete input parameter set for one evaluation."""
    channel: ChannelParams
    detector: DetectorParams
    modulation: ModulationParams
    reference: PhaseRefParams
    hardware: HardwareParams
    model: ModelKind = ModelKind.CONVENTIONAL
    mapping: PhaseNoiseMapping = PhaseNoiseMapping.LINEAR
    xi_tot: Optional[float] = Field(None, ge=0, description="Measured total excess noise (SNU)")

    def at_distance(self, distance_km: float) -> "ScenarioConfig":
        """Copy of this scenario with a different fiber length."""
        return self.model_copy(update={"channel": self.channel.model_copy(update={"distance_km": distance_km})})


# Noise schemas
class PhaseVariance(_Frozen):
    """Decomposition of the signal-phase estimation variance (rad²)."""
    v_drift: float = Field(..., ge=0)
    v_channel: float = Field(..., ge=0)
    v_error: float = Field(..., ge=0)
    v_est: float = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_sum(self) -> "PhaseVariance":
        total = self.v_drift + self.v_channel + self.v_error
        if abs(self.v_est - total) > 1e-12 * max(1.0, total):
            raise ValueError("v_est must equal v_drift + v_channel + v_error")
        return self


class ReferenceNoise(_Frozen):
    """Noise imposed on the phase reference and its trust split."""
    chi_total: float
    chi_untrusted: float
    chi_trusted: float
    t: float = Field(..., gt=0, le=1)


class NoiseBudget(_Frozen):
    """Excess-noise components; xi_error_t is Bob-referred, the rest channel-input referred."""
    xi0: float
    xi_am: float
    xi_le: float
    xi_adc: float
    xi_rest: float
    xi_drift: float
    xi_channel: float
    xi_error: float
    xi_error_u: float
    xi_error_t: float
    xi_phase: float
    xi_tot: float
    t: float = Field(..., gt=0, le=1)
    mapping: PhaseNoiseMapping = PhaseNoiseMapping.LINEAR
    measured: bool = False
    phase: Optional[PhaseVariance] = None
    reference: Optional[ReferenceNoise] = None


class AddedNoise(_Frozen):
    """Added noises entering the covariance-matrix key-rate formulas."""
    chi_line: float
    chi_het: float
    chi_tot: float
    model: ModelKind
    t_used: float = Field(..., gt=0, le=1)
    label: Optional[str] = None


# Attack schemas
class AttackParams(_Frozen):
    """Fiber swap used in the phase-reference intensity attack."""
    alpha_std: float = Field(ALPHA_STD_DB_PER_KM, ge=0, description="Standard fiber loss (dB/km)")
    alpha_low: float = Field(ALPHA_LOW_DB_PER_KM, ge=0, description="Ultralow-loss fiber (dB/km)")

    @model_validator(mode="after")
    def validate_order(self) -> "AttackParams":
        if self.alpha_low > self.alpha_std:
            raise ValueError("alpha_low must not exceed alpha_std")
        return self


class IntensityAlarm(_Frozen):
    """Advisory output of the phase-reference intensity monitor."""
    observed_e_r2: float
    calibrated_e_r2: float
    relative_deviation: float
    threshold: float
    triggered: bool
    message: str


# Result schemas
class KeyRateBreakdown(_Frozen):
    """Asymptotic key rate and its intermediates."""
    i_ab: float
    lambdas: Tuple[float, float, float, float, float]
    chi_be: float
    k: float
    key: float
    model: ModelKind
    added: Optional[AddedNoise] = None


class McResult(_Frozen):
    """Monte Carlo estimate of one quantity."""
    estimate: float
    std_error: float = Field(..., ge=0)
    n_samples: int
    seed: int


class OracleCheck(_Frozen):
    """One row of the Monte Carlo validation report."""
    quantity: str
    analytic: float
    empirical: float
    std_error: float
    sigma: float
    passed: bool
    note: Optional[str] = None

    @computed_field
    @property
    def deviation_sigma(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.empirical == self.analytic else float("inf")
        return abs(self.empirical - self.analytic) / self.std_error


# CLI schemas
class SweepSpec(_Frozen):
    """Distance sweep request."""
    start_km: float = Field(0.0, ge=0)
    stop_km: float = Field(100.0, ge=0)
    step_km: float = Field(1.0, gt=0)
    models: List[ModelKind] = Field(default_factory=lambda: [ModelKind.CONVENTIONAL, ModelKind.TRUSTED],
                                    min_length=1)
    include_attack: bool = False
    attack: AttackParams = Field(default_factory=AttackParams)
    monitored: bool = True
    fluctuation: float = Field(0.0, ge=0, description="Relative reference-intensity fluctuation bound")

    @model_validator(mode="after")
    def validate_range(self) -> "SweepSpec":
        if self.start_km > self.stop_km:
            raise ValueError("start_km must not exceed stop_km")
        return self

    def distances(self) -> List[float]:
        count = int((self.stop_km - self.start_km) / self.step_km + 1e-9) + 1
        return [self.start_km + i * self.step_km for i in range(count)]


class OutputRow(_Frozen):
    """One distance of a sweep."""
    distance_km: float
    transmittance: float
    xi_tot: float
    xi_tot_trusted: float
    xi_error_t_over_t: float
    columns: Dict[str, float] = Field(default_factory=dict)
    eigenvalues: Optional[Dict[str, Tuple[float, ...]]] = None


class SweepResult(_Frozen):
    """Rows plus per-model maximum distance."""
    rows: List[OutputRow]
    max_distance_km: Dict[str, Optional[float]]
    ordering_ok: Optional[bool] = None
    alarms: List[IntensityAlarm] = Field(default_factory=list)


class ReproductionItem(_Frozen):
    """One computed-versus-published comparison."""
    quantity: str
    computed: float
    published: float
    tolerance: float
    relative: bool = True
    passed: bool


class ReproductionReport(_Frozen):
    """Experimental-parameter reproduction at 25 km."""
    items: List[ReproductionItem]
    ratio: float
    ratio_range: Tuple[float, float]
    ratio_ok: bool

    @computed_field
    @property
    def passed(self) -> bool:
        return self.ratio_ok and all(item.passed for item in self.items)
