import json

import pytest

from conftest import FIXTURE_DIR, ROOT
from iotmm.errors import ParseError, ScenarioError, ValidationError
from iotmm.scenario import BUNDLED, dump_scenario, load_bundled, load_scenario, loads_scenario


def test_gartner_2017_observation():
    s = load_scenario(ROOT / "scenarios" / "gartner-2017.json")
    obs = s.observations[0]
    assert (obs.vulnerable_count, obs.total_count) == (378_000_000, 8_400_000_000)


def test_empty_file_is_parse_error(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    with pytest.raises(ParseError) as info:
        load_scenario(p)
    assert info.value.line == 1


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        loads_scenario('{\n  "label": "x",\n  oops\n}')
    assert info.value.line == 3


def test_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/scenario.json")


def _doc(**extra):
    d = {"schema_version": "1", "label": "t"}
    d.update(extra)
    return json.dumps(d)


def test_vulnerable_exceeds_total_names_observation():
    text = _doc(observations=[{"label": "bad", "vulnerable_count": 11, "total_count": 10}])
    with pytest.raises(ValidationError) as info:
        loads_scenario(text)
    paths = [p for p, _ in info.value.problems]
    assert paths == ["observations[0].vulnerable_count"]
    assert "'bad'" in info.value.problems[0][1]


def test_field_paths_for_asset_problems():
    asset = {"id": "x", "value_role": "IoTCA", "origin": "IoTAD",
             "valuation": {"basis": "market", "amount": 10}}
    bad_value = dict(asset, id="y", value=-3)
    bad_exposure = dict(asset, id="z", residual_exposure_mm=2_000_000)
    text = _doc(things=[{"id": "t", "assets": [asset, asset, bad_value, bad_exposure]}])
    with pytest.raises(ValidationError) as info:
        loads_scenario(text)
    paths = [p for p, _ in info.value.problems]
    assert "things[0].assets[1].id" in paths
    assert "things[0].assets[2].value" in paths
    assert "things[0].assets[3].residual_exposure_mm" in paths


def test_unknown_fields_and_versions_rejected():
    with pytest.raises(ValidationError) as info:
        loads_scenario(json.dumps({"schema_version": "9", "label": "x", "extra": 1}))
    paths = {p for p, _ in info.value.problems}
    assert paths == {"schema_version", "extra"}


def test_var_config_problems():
    with pytest.raises(ValidationError) as info:
        loads_scenario(_doc(var_config={"paths": 0, "seed": 1, "confidence": 1.5}))
    assert {p for p, _ in info.value.problems} == {"var_config.paths", "var_config.confidence"}


def test_inconsistent_probability_case():
    case = {"name": "c", "p_tx_given_y": 0.9, "p_tx_given_t": 0.1, "p_tx": 0.6, "p_t": 0.5}
    with pytest.raises(ValidationError, match="disagrees"):
        loads_scenario(_doc(probability_cases=[case]))


def test_minimal_scenario():
    s = loads_scenario(_doc())
    assert s.things == () and s.var_config is None


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_round_trip(name):
    s = load_bundled(name)
    again = loads_scenario(dump_scenario(s))
    assert again == s
    assert dump_scenario(again) == dump_scenario(s)


def test_fixture_round_trip():
    s = load_scenario(FIXTURE_DIR / "var-fixture.json")
    assert loads_scenario(dump_scenario(s)) == s
