"""Assessment reports: running a scenario and emitting JSON or CSV.

Report JSON (schema 1)::

    {
      "engine_version": "...",
      "report_schema_version": "1",
      "scenario": {"label": ..., "schema_version": ...},
      "provenance": {...},
      "elements": {
        "<element>": {"<quantity>": {"value": ..., "display": "...", "note": "..."}}
      }
    }

``value`` carries full precision (exact decimals where the arithmetic is
exact); ``display`` is rounded to the precision of the published figures.
CSV carries one row per quantity with columns
``scenario,element,quantity,value,display_value,provenance_note``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from . import REPORT_SCHEMA_VERSION, __version__, display, jsonio
from .errors import IotmmError, UnsupportedFormat
from .micromort import aggregate_willingness_to_pay, iot_micromort, market_value_per_micromort, micromort_reduction_value
from .scenario import Scenario
from .valuation import composition, residual_risk, total_digital_value
from .var import QUANTILE_CONVENTION, VarConfig, historical_var, point_var, var_curve
from .vertex import evaluate_case

CSV_COLUMNS = ("scenario", "element", "quantity", "value", "display_value", "provenance_note")
RANDOM_STREAM = "Philox4x64-10 keyed by (seed, 0); path p uses counter blocks from p*ceil(n_assets/4); asset j reads word j"


@dataclass(frozen=True)
class Row:
    element: str
    quantity: str
    value: object
    display: str
    note: str = ""


@dataclass
class AssessmentReport:
    scenario_label: str = ""
    scenario_schema_version: str = ""
    provenance: dict = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)

    def add(self, element, quantity, value, shown, note=""):
        self.rows.append(Row(element, quantity, value, shown, note))

    def get(self, element: str, quantity: str) -> Row:
        for row in self.rows:
            if row.element == element and row.quantity == quantity:
                return row
        raise KeyError((element, quantity))


class ScenarioRunError(IotmmError):
    """A module error annotated with the scenario element that raised it."""

    def __init__(self, element: str, cause: IotmmError):
        self.element = element
        self.cause = cause
        super().__init__(f"{element}: {cause}")


def _json_value(v):
    if isinstance(v, Fraction):
        return display.exact_decimal(v)
    return v


def _grid_label(c: float) -> str:
    return f"var@{c!r}"


def _add_var_section(rep: AssessmentReport, el: str, thing, cfg: VarConfig, grid, reduction) -> None:
    summary, curve = var_curve(thing, cfg, sorted(set(grid or ())))
    rep.add(el, "mc.var_at_confidence", summary.var_at_confidence, display.currency(summary.var_at_confidence))
    rep.add(el, "mc.confidence", summary.confidence, display.probability(summary.confidence))
    rep.add(el, "mc.mean_loss", summary.mean_loss, display.currency(summary.mean_loss))
    rep.add(el, "mc.max_loss", summary.max_loss, display.currency(summary.max_loss))
    rep.add(el, "mc.standard_error_of_mean", summary.standard_error_estimate,
            display.currency(summary.standard_error_estimate))
    rep.add(el, "mc.path_count", summary.path_count, display.count(summary.path_count))
    rep.add(el, "mc.seed", summary.seed, display.count(summary.seed))
    rep.add(el, "mc.horizon_months", summary.horizon_months, display.count(summary.horizon_months))
    for c, q in curve:
        rep.add(el, _grid_label(c), q, display.currency(q))
    if cfg.horizon_months == 12:
        limit = summary.var_at_confidence
    else:
        limit, _ = var_curve(thing, VarConfig(cfg.paths, cfg.seed, 12, cfg.confidence), ())
        limit = limit.var_at_confidence
    rep.add(el, "loss_limit_12m", limit, display.currency(limit))
    value = micromort_reduction_value(display.exact_decimal(limit), reduction)
    rep.add(el, "iotmm2_reduction_value", value, display.currency(value),
            f"linear price of a {display.significant(reduction * 100, 6)}% cut in the 12-month loss limit")


def _thing_rows(rep: AssessmentReport, s: Scenario, thing) -> None:
    el = f"thing/{thing.id}"
    comp = composition(thing)
    rep.add(el, "asset_count", len(thing.assets), display.count(len(thing.assets)))
    rep.add(el, "core_count", comp.core_count, display.count(comp.core_count))
    rep.add(el, "operational_count", comp.operational_count, display.count(comp.operational_count))
    rep.add(el, "core_value_sum", comp.core_value_sum, display.currency(comp.core_value_sum))
    rep.add(el, "operational_value_sum", comp.operational_value_sum, display.currency(comp.operational_value_sum))
    rep.add(el, "digitised_count", comp.digitised_count, display.count(comp.digitised_count))
    rep.add(el, "born_digital_count", comp.born_digital_count, display.count(comp.born_digital_count))
    rep.add(el, "digitised_value_sum", comp.digitised_value_sum, display.currency(comp.digitised_value_sum))
    rep.add(el, "born_digital_value_sum", comp.born_digital_value_sum,
            display.currency(comp.born_digital_value_sum))
    for name, r in (("ca_to_oa_ratio", comp.ca_to_oa_ratio), ("da_to_ad_ratio", comp.da_to_ad_ratio)):
        if r is None:
            rep.add(el, name, None, "undefined", "value-weighted; denominator sum is zero")
        else:
            rep.add(el, name, r, display.significant(r, 4), "value-weighted")
    total = total_digital_value(thing)
    rep.add(el, "total_digital_value", total, display.currency(total), thing.currency)
    if thing.risk_factors is not None:
        rr = residual_risk(thing.risk_factors)
        rep.add(el, "residual_risk", rr, display.significant(rr, 4), "inherent risk / control effectiveness")
    horizon = s.var_config.horizon_months if s.var_config else 12
    pv = point_var(thing, horizon)
    rep.add(el, "point_var", pv, display.currency(pv), f"expected loss over {horizon} months")
    if s.var_config is not None:
        _add_var_section(rep, el, thing, s.var_config, s.confidence_grid, s.reduction_percent)


def _run(rep: AssessmentReport, s: Scenario) -> None:
    for obs in s.observations:
        el = f"observation/{obs.label}"
        digits = obs.display_digits or display.RATIO_DIGITS
        try:
            res = iot_micromort(obs, digits)
        except IotmmError as exc:
            raise ScenarioRunError(el, exc) from exc
        rep.add(el, "vulnerable_count", obs.vulnerable_count, display.count(obs.vulnerable_count))
        rep.add(el, "total_count", obs.total_count, display.count(obs.total_count))
        rep.add(el, "ratio", res.ratio, res.display, obs.note)
        rep.add(el, "ratio_fraction", f"{res.ratio.numerator}/{res.ratio.denominator}",
                f"{res.ratio.numerator}/{res.ratio.denominator}")
        rep.add(el, "micromorts", res.micromorts, display.significant(res.micromorts, 6))

    for nc in s.probability_cases:
        el = f"probability_case/{nc.name}"
        try:
            cr = evaluate_case(nc.case)
        except IotmmError as exc:
            raise ScenarioRunError(el, exc) from exc
        for name in sorted(cr.values):
            note = cr.origin[name] + (f"; {nc.note}" if nc.note else "")
            rep.add(el, name, cr.values[name], display.probability(cr.values[name]), note)
        for label in sorted(cr.states):
            q = cr.states[label]
            rep.add(el, f"p_tx_given_t_in_state[{label}]", q, display.probability(q), "derived")

    for thing in s.things:
        try:
            _thing_rows(rep, s, thing)
        except IotmmError as exc:
            raise ScenarioRunError(f"thing/{thing.id}", exc) from exc

    if s.historical_losses is not None:
        el = "historical"
        confs = sorted({(s.var_config.confidence if s.var_config else 0.95), *(s.confidence_grid or ())})
        rep.add(el, "record_count", len(s.historical_losses), display.count(len(s.historical_losses)))
        try:
            for c in confs:
                q = historical_var(s.historical_losses, c)
                rep.add(el, _grid_label(c), q, display.currency(q))
        except IotmmError as exc:
            raise ScenarioRunError(el, exc) from exc

    if s.market_value_inputs is not None:
        el = "market_value"
        m = s.market_value_inputs
        try:
            per = market_value_per_micromort(m.security_spending, m.device_count)
        except IotmmError as exc:
            raise ScenarioRunError(el, exc) from exc
        rep.add(el, "security_spending", m.security_spending, display.currency(m.security_spending))
        rep.add(el, "device_count", m.device_count, display.count(m.device_count))
        rep.add(el, "value_per_device", per, display.currency(per), m.note)

    if s.wtp_inputs is not None:
        el = "wtp"
        w = s.wtp_inputs
        try:
            a = aggregate_willingness_to_pay(w.per_unit_wtp, w.population, w.risk_reduction)
        except IotmmError as exc:
            raise ScenarioRunError(el, exc) from exc
        rep.add(el, "per_unit_wtp", a.per_unit_wtp, display.currency(a.per_unit_wtp))
        rep.add(el, "population", a.population, display.count(a.population))
        rep.add(el, "risk_reduction", a.risk_reduction, display.significant(a.risk_reduction, 6))
        rep.add(el, "aggregate", a.aggregate, display.currency(a.aggregate), w.note)
        rep.add(el, "expected_deaths_avoided", a.expected_deaths_avoided,
                display.significant(a.expected_deaths_avoided, 6))


def run_scenario(s: Scenario, overrides: dict | None = None) -> AssessmentReport:
    """Evaluate every section of ``s``. ``overrides`` is recorded, not applied."""
    rep = AssessmentReport(s.label, s.schema_version)
    rep.provenance = {
        "quantile_convention": QUANTILE_CONVENTION,
        "random_stream": RANDOM_STREAM,
        "scenario_notes": list(s.notes),
        "overrides": dict(sorted((overrides or {}).items())),
    }
    _run(rep, s)
    for key, value in rep.provenance["overrides"].items():
        rep.add("provenance", f"override.{key}", value, str(value), "command-line flag overrides scenario value")
    return rep


def report_to_dict(rep: AssessmentReport) -> dict:
    elements: dict = {}
    for row in rep.rows:
        elements.setdefault(row.element, {})[row.quantity] = {
            "value": _json_value(row.value),
            "display": row.display,
            "note": row.note,
        }
    return {
        "engine_version": __version__,
        "report_schema_version": REPORT_SCHEMA_VERSION,
        "scenario": {"label": rep.scenario_label, "schema_version": rep.scenario_schema_version},
        "provenance": rep.provenance,
        "elements": elements,
    }


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (Fraction, Decimal, float)):
        return jsonio.dumps(_json_value(v)).strip()
    return str(v)


def emit_report(rep: AssessmentReport, fmt: str) -> bytes:
    if fmt == "json":
        return jsonio.dumps(report_to_dict(rep)).encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rep.rows:
            w.writerow((rep.scenario_label, row.element, row.quantity, _csv_value(row.value), row.display, row.note))
        return buf.getvalue().encode("utf-8")
    raise UnsupportedFormat(f"unsupported report format {fmt!r}; use json or csv")
