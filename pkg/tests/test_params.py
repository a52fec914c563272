import json

import pytest

from llo_qkd.core.const import TABLE1_PARAMS, ModelKind, PhaseNoiseMapping
from llo_qkd.core.exceptions import ParseError, ValidationError
from llo_qkd.core.params import (
    config_to_mapping, dump_config, fig2_config, load_config, load_config_file, transmittance, validate,
)
from llo_qkd.models.schemas import ChannelParams, ModulationParams


@pytest.mark.parametrize("distance, expected", [(0.0, 1.0), (25.0, 0.3162278), (50.0, 0.1)])
def test_transmittance(distance, expected):
    channel = ChannelParams(alpha_db_per_km=0.2, distance_km=distance, epsilon0=0.002)
    assert transmittance(channel) == pytest.approx(expected, rel=1e-6)


def test_transmittance_strictly_decreasing():
    values = [
        transmittance(ChannelParams(alpha_db_per_km=0.2, distance_km=d, epsilon0=0.0))
        for d in range(0, 101, 5)
    ]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_load_table1_document():
    config = load_config(json.dumps(TABLE1_PARAMS))

    assert config.detector.eta == 0.56
    assert config.modulation.v_a == 3.073
    assert config.xi_tot == 0.056
    assert validate(config) == []


def test_missing_override_keeps_derivation_path():
    config = load_config(json.dumps({"distance_km": 10}))
    assert config.reference.e_r2_alice_override is None
    assert config.model == ModelKind.CONVENTIONAL
    assert config.mapping == PhaseNoiseMapping.LINEAR


def test_out_of_range_eta_names_field():
    with pytest.raises(ValidationError) as exc_info:
        load_config(json.dumps({"eta": 1.5}))
    assert exc_info.value.field == "eta"


def test_unknown_key_rejected():
    with pytest.raises(ValidationError) as exc_info:
        load_config(json.dumps({"etaa": 0.5}))
    assert exc_info.value.field == "etaa"


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", "3.5"])
def test_malformed_document(text):
    with pytest.raises(ParseError):
        load_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_config_file(tmp_path / "absent.json")


def test_load_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"distance_km": 40, "model": "trusted"}))
    config = load_config_file(path)
    assert config.channel.distance_km == 40
    assert config.model == ModelKind.TRUSTED


def test_dump_round_trip(table1_config):
    assert load_config(dump_config(table1_config)) == table1_config

    variant = fig2_config(33.3, mapping="exact", model="all_error_trusted", e_r2_alice_override=5000.0)
    assert load_config(dump_config(variant)) == variant


def test_mapping_keys_are_flat(fig2_config):
    flat = config_to_mapping(fig2_config)
    assert flat["eta"] == 0.5
    assert flat["model"] == "conventional"
    assert "channel" not in flat


def test_validate_reports_zero_modulation(fig2_config):
    bad = ModulationParams.model_construct(v_a=0.0, f_rep=100e6, beta=0.95)
    config = fig2_config.model_copy(update={"modulation": bad})

    violations = validate(config)
    assert [v.field for v in violations] == ["v_a"]


def test_validate_reports_negative_distance(fig2_config):
    bad = ChannelParams.model_construct(alpha_db_per_km=0.2, distance_km=-1.0, epsilon0=0.002)
    config = fig2_config.model_copy(update={"channel": bad})

    violations = validate(config)
    assert [v.field for v in violations] == ["distance_km"]


def test_at_distance_leaves_original(fig2_config):
    moved = fig2_config.at_distance(50.0)
    assert moved.channel.distance_km == 50.0
    assert fig2_config.channel.distance_km == 25.0
