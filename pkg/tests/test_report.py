import csv
import io
import json
from decimal import Decimal

import pytest

from conftest import FIXTURE_DIR
from iotmm.errors import UnsupportedFormat
from iotmm.report import CSV_COLUMNS, AssessmentReport, ScenarioRunError, emit_report, run_scenario
from iotmm.scenario import BUNDLED, load_bundled, load_scenario, loads_scenario


def test_empty_report_documents():
    rep = AssessmentReport()
    doc = json.loads(emit_report(rep, "json"))
    assert doc["elements"] == {}
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv").decode())))
    assert rows == [list(CSV_COLUMNS)]


def test_unsupported_format():
    with pytest.raises(UnsupportedFormat):
        emit_report(AssessmentReport(), "xml")


def test_gartner_2017_ratio():
    rep = run_scenario(load_bundled("gartner-2017"))
    row = rep.get("observation/2017", "ratio")
    assert row.display == "0.045"
    assert float(row.value) == 0.045


def test_vigilante_display():
    rep = run_scenario(load_bundled("vigilante-2017"))
    assert rep.get("observation/2017-01", "ratio").display == "0.0021"


def test_persirai_note():
    rep = run_scenario(load_bundled("persirai-2017"))
    row = rep.get("observation/persirai-2017", "ratio")
    assert "paper prints 0.0714; computed 7.14e-5 against Gartner total" in row.note


def test_no_optional_sections():
    rep = run_scenario(loads_scenario('{"schema_version": "1", "label": "bare"}'))
    assert rep.rows == []


def test_fixture_sections():
    rep = run_scenario(load_scenario(FIXTURE_DIR / "var-fixture.json"))
    assert rep.get("historical", "var@0.95").value == 100
    assert rep.get("historical", "var@0.5").value == 50
    assert rep.get("thing/gateway", "point_var").value == Decimal(39)
    assert rep.get("thing/gateway", "residual_risk").value == 2.0
    limit = rep.get("thing/gateway", "loss_limit_12m").value
    assert rep.get("thing/gateway", "iotmm2_reduction_value").value == Decimal(str(limit)) * Decimal("0.01")


def test_errors_are_annotated():
    text = json.dumps({"schema_version": "1", "label": "x", "probability_cases": [
        {"name": "flat", "p_tx_given_y": 0.4, "p_tx_given_t": 0.4, "p_tx": 0.4}]})
    with pytest.raises(ScenarioRunError, match="probability_case/flat"):
        run_scenario(loads_scenario(text))


def test_json_numbers_are_exact():
    doc = json.loads(emit_report(run_scenario(load_bundled("wtp-example")), "json"), parse_float=Decimal)
    assert doc["elements"]["wtp"]["aggregate"]["value"] == Decimal("412.00000")


@pytest.mark.parametrize("name", BUNDLED)
def test_reports_are_pure(name):
    s = load_bundled(name)
    for fmt in ("json", "csv"):
        assert emit_report(run_scenario(s), fmt) == emit_report(run_scenario(s), fmt)
