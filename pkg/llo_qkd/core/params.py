"""Scenario ingestion, validation and the channel transmittance."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict
from pydantic import ValidationError as PydanticValidationError

from llo_qkd.core.const import FIG2_DEFAULTS, TABLE1_PARAMS, ModelKind, PhaseNoiseMapping
from llo_qkd.core.exceptions import ParseError, ValidationError
from llo_qkd.models.schemas import (
    ChannelParams, DetectorParams, HardwareParams, ModulationParams,
    PhaseRefParams, ScenarioConfig, Violation,
)

_LOGGER = logging.getLogger(__name__)

_SECTIONS = {
    "channel": ("alpha_db_per_km", "distance_km", "epsilon0"),
    "detector": ("eta", "v_el"),
    "modulation": ("v_a", "f_rep", "beta"),
    "reference": ("e_r2_bob", "e_r2_alice_override", "dnu_a", "dnu_b", "dt", "v_channel"),
    "hardware": ("xi0", "d_db", "n_adc", "r_e_db", "r_p_db"),
}


class ScenarioDocument(BaseModel):
    """Flat key-value scenario document; absent keys take the Fig. 2 defaults."""

    model_config = ConfigDict(extra="forbid")

    alpha_db_per_km: float = FIG2_DEFAULTS["alpha_db_per_km"]
    distance_km: float = FIG2_DEFAULTS["distance_km"]
    epsilon0: float = FIG2_DEFAULTS["epsilon0"]
    eta: float = FIG2_DEFAULTS["eta"]
    v_el: float = FIG2_DEFAULTS["v_el"]
    v_a: float = FIG2_DEFAULTS["v_a"]
    f_rep: float = FIG2_DEFAULTS["f_rep"]
    beta: float = FIG2_DEFAULTS["beta"]
    e_r2_bob: float = FIG2_DEFAULTS["e_r2_bob"]
    e_r2_alice_override: Optional[float] = None
    dnu_a: float = FIG2_DEFAULTS["dnu_a"]
    dnu_b: float = FIG2_DEFAULTS["dnu_b"]
    dt: float = FIG2_DEFAULTS["dt"]
    v_channel: float = FIG2_DEFAULTS["v_channel"]
    xi0: float = FIG2_DEFAULTS["xi0"]
    d_db: float = FIG2_DEFAULTS["d_db"]
    n_adc: int = FIG2_DEFAULTS["n_adc"]
    r_e_db: float = FIG2_DEFAULTS["r_e_db"]
    r_p_db: float = FIG2_DEFAULTS["r_p_db"]
    xi_tot: Optional[float] = None
    model: ModelKind = ModelKind.CONVENTIONAL
    mapping: PhaseNoiseMapping = PhaseNoiseMapping.LINEAR


def _violations(exc: PydanticValidationError) -> List[Violation]:
    violations = []
    for error in exc.errors():
        loc = error.get("loc") or ()
        field = str(loc[-1]) if loc else "config"
        violations.append(Violation(field=field, rule=error.get("msg", "invalid")))
    return violations


def transmittance(channel: ChannelParams) -> float:
    """Channel transmittance T = 10^(-alpha L / 10)."""
    return 10.0 ** (-channel.alpha_db_per_km * channel.distance_km / 10.0)


def config_from_mapping(data: Dict[str, Any]) -> ScenarioConfig:
    """Build a scenario from flat key-value data, applying defaults."""
    try:
        document = ScenarioDocument.model_validate(data)
    except PydanticValidationError as e:
        raise ValidationError(_violations(e)) from e

    flat = document.model_dump()
    sections = {name: {key: flat[key] for key in keys} for name, keys in _SECTIONS.items()}
    try:
        return ScenarioConfig(
            channel=ChannelParams(**sections["channel"]),
            detector=DetectorParams(**sections["detector"]),
            modulation=ModulationParams(**sections["modulation"]),
            reference=PhaseRefParams(**sections["reference"]),
            hardware=HardwareParams(**sections["hardware"]),
            model=flat["model"],
            mapping=flat["mapping"],
            xi_tot=flat["xi_tot"],
        )
    except PydanticValidationError as e:
        raise ValidationError(_violations(e)) from e


def load_config(text: str) -> ScenarioConfig:
    """
    Parse a JSON scenario document.

    Raises:
        ParseError: malformed JSON or not a single object
        ValidationError: an invariant is violated; ``field`` names the first offender
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed scenario document: {e}") from e

    if not isinstance(data, dict):
        raise ParseError("Scenario document must be a single JSON object")

    config = config_from_mapping(data)
    _LOGGER.debug(f"Loaded scenario at {config.channel.distance_km} km, model {config.model.value}")
    return config


def load_config_file(path: Union[str, Path]) -> ScenarioConfig:
    """Read and parse a scenario file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read scenario file {path}: {e}") from e
    return load_config(text)


def config_to_mapping(config: ScenarioConfig) -> Dict[str, Any]:
    """Flatten a scenario into its document keys."""
    flat: Dict[str, Any] = {}
    for name in _SECTIONS:
        flat.update(getattr(config, name).model_dump())
    flat["xi_tot"] = config.xi_tot
    flat["model"] = config.model.value
    flat["mapping"] = config.mapping.value
    return flat


def dump_config(config: ScenarioConfig) -> str:
    """Serialize a scenario; ``load_config(dump_config(c)) == c``."""
    return json.dumps(config_to_mapping(config), indent=2)


def validate(config: ScenarioConfig) -> List[Violation]:
    """Re-check every invariant; empty list iff the scenario is valid."""
    violations: List[Violation] = []
    for name in _SECTIONS:
        section = getattr(config, name)
        try:
            type(section).model_validate(section.model_dump())
        except PydanticValidationError as e:
            violations.extend(_violations(e))
    if config.xi_tot is not None and config.xi_tot < 0:
        violations.append(Violation(field="xi_tot", rule="Input should be greater than or equal to 0"))
    return violations


def fig2_config(distance_km: float = 25.0, **overrides: Any) -> ScenarioConfig:
    """Simulation regime of the distance curves."""
    return config_from_mapping({**FIG2_DEFAULTS, "distance_km": distance_km, **overrides})


def table1_config(**overrides: Any) -> ScenarioConfig:
    """Pilot-tone experiment at 25 km with the measured excess noise."""
    return config_from_mapping({**TABLE1_PARAMS, **overrides})
