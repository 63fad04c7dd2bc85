"""Scenario files: JSON schema version 1.

A scenario bundles the inputs of one assessment. Loading validates the whole
document and reports every problem with its field path, e.g.
``things[0].assets[2].value``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path
from types import SimpleNamespace

from . import SCENARIO_SCHEMA_VERSION, jsonio
from .errors import ParseError, ScenarioError, ValidationError
from .inventory import (
    BasisKind,
    DigitalAsset,
    KiotcrfProfile,
    MicroMortObservation,
    Origin,
    StateEntry,
    StrategyTag,
    Thing,
    ValuationBasis,
    ValueRole,
    VertexProbabilityCase,
    validate_asset,
    validate_observation,
    validate_probability_case,
    validate_profile,
)
from .var import VarConfig, config_problems

BUNDLED = (
    "gartner-2017",
    "gartner-2020",
    "persirai-2017",
    "vigilante-2017",
    "wtp-example",
    "probability-example",
)


@dataclass(frozen=True)
class NamedCase:
    name: str
    case: VertexProbabilityCase
    note: str = ""


@dataclass(frozen=True)
class WtpInputs:
    per_unit_wtp: Decimal
    population: int
    risk_reduction: Decimal
    note: str = ""


@dataclass(frozen=True)
class MarketValueInputs:
    security_spending: Decimal
    device_count: int
    note: str = ""


@dataclass(frozen=True)
class Scenario:
    schema_version: str
    label: str
    description: str = ""
    notes: tuple[str, ...] = ()
    things: tuple[Thing, ...] = ()
    observations: tuple[MicroMortObservation, ...] = ()
    probability_cases: tuple[NamedCase, ...] = ()
    var_config: VarConfig | None = None
    historical_losses: tuple[Decimal, ...] | None = None
    wtp_inputs: WtpInputs | None = None
    market_value_inputs: MarketValueInputs | None = None
    confidence_grid: tuple[float, ...] | None = None
    reduction_percent: Decimal = Decimal("0.01")


class _Reader:
    """Typed field access that records problems instead of raising."""

    def __init__(self):
        self.problems: list[tuple[str, str]] = []

    def bad(self, path: str, msg: str) -> None:
        self.problems.append((path, msg))

    def obj(self, x, path: str, allowed: set[str], required: set[str] = frozenset()) -> dict | None:
        if not isinstance(x, dict):
            self.bad(path, "expected an object")
            return None
        for key in sorted(set(x) - allowed):
            self.bad(f"{path}.{key}" if path else key, "unknown field")
        for key in sorted(required - set(x)):
            self.bad(f"{path}.{key}" if path else key, "missing required field")
        return x

    def string(self, x, path: str) -> str | None:
        if not isinstance(x, str):
            self.bad(path, "expected a string")
            return None
        return x

    def integer(self, x, path: str) -> int | None:
        if isinstance(x, bool):
            self.bad(path, "expected an integer")
            return None
        if isinstance(x, int):
            return x
        if isinstance(x, Decimal) and x.is_finite() and x == x.to_integral_value():
            return int(x)
        self.bad(path, "expected an integer")
        return None

    def amount(self, x, path: str) -> Decimal | None:
        if isinstance(x, bool):
            self.bad(path, "expected a number")
            return None
        try:
            d = Decimal(x) if isinstance(x, (int, str)) else x
        except InvalidOperation:
            d = None
        if not isinstance(d, Decimal) or not d.is_finite():
            self.bad(path, "expected a finite number")
            return None
        return d

    def real(self, x, path: str) -> float | None:
        d = self.amount(x, path)
        if d is None:
            return None
        f = float(d)
        if not math.isfinite(f):
            self.bad(path, "number out of range")
            return None
        return f

    def probability(self, x, path: str) -> float | None:
        f = self.real(x, path)
        if f is not None and not 0 <= f <= 1:
            self.bad(path, "expected a probability in [0, 1]")
            return None
        return f

    def array(self, x, path: str) -> list | None:
        if not isinstance(x, list):
            self.bad(path, "expected an array")
            return None
        return x

    def enum(self, cls, x, path: str):
        try:
            return cls(x)
        except ValueError:
            choices = ", ".join(repr(m.value) for m in cls)
            self.bad(path, f"expected one of {choices}")
            return None


_ASSET_KEYS = {"id", "name", "value_role", "origin", "valuation", "value",
               "residual_exposure_mm", "severity_fraction"}
_THING_KEYS = {"id", "name", "currency", "assets", "risk_factors", "strategy_tags"}
_TOP_KEYS = {"schema_version", "label", "description", "notes", "things", "observations",
             "probability_cases", "var_config", "historical_losses", "wtp_inputs",
             "market_value_inputs", "confidence_grid", "reduction_percent"}


def _asset(r: _Reader, x, path: str) -> DigitalAsset | None:
    o = r.obj(x, path, _ASSET_KEYS, {"id", "value_role", "origin", "valuation"})
    if o is None:
        return None
    n = len(r.problems)
    aid = r.string(o.get("id"), f"{path}.id")
    name = r.string(o.get("name", aid or ""), f"{path}.name")
    role = r.enum(ValueRole, o.get("value_role"), f"{path}.value_role")
    origin = r.enum(Origin, o.get("origin"), f"{path}.origin")
    val = r.obj(o.get("valuation"), f"{path}.valuation", {"basis", "amount"}, {"basis", "amount"})
    basis = amount = None
    if val is not None:
        basis = r.enum(BasisKind, val.get("basis"), f"{path}.valuation.basis")
        amount = r.amount(val.get("amount"), f"{path}.valuation.amount")
    value = r.amount(o["value"], f"{path}.value") if "value" in o else amount
    mm = r.amount(o.get("residual_exposure_mm", 0), f"{path}.residual_exposure_mm")
    sev = r.amount(o.get("severity_fraction", 1), f"{path}.severity_fraction")
    if len(r.problems) > n:
        return None
    asset = DigitalAsset(aid, name, role, origin, ValuationBasis(basis, amount), value, mm, sev)
    for msg in validate_asset(asset, where=path):
        text = msg[len(path) + 2:]
        r.bad(f"{path}.{text.split()[0]}", text)
    return asset


def _thing(r: _Reader, x, path: str, currency: str) -> Thing | None:
    o = r.obj(x, path, _THING_KEYS, {"id"})
    if o is None:
        return None
    n = len(r.problems)
    tid = r.string(o.get("id"), f"{path}.id")
    name = r.string(o.get("name", tid or ""), f"{path}.name")
    cur = r.string(o.get("currency", currency), f"{path}.currency")
    assets = []
    seen: set[str] = set()
    for i, a in enumerate(r.array(o.get("assets", []), f"{path}.assets") or []):
        asset = _asset(r, a, f"{path}.assets[{i}]")
        if asset is not None:
            if asset.id in seen:
                r.bad(f"{path}.assets[{i}].id", f"duplicate asset id {asset.id!r}")
            seen.add(asset.id)
            assets.append(asset)
    profile = None
    if o.get("risk_factors") is not None:
        rp = f"{path}.risk_factors"
        rf = r.obj(o["risk_factors"], rp,
                   {"inherent_risk", "control_effectiveness", "technological", "non_technological"},
                   {"inherent_risk", "control_effectiveness"})
        if rf is not None:
            inh = r.real(rf.get("inherent_risk"), f"{rp}.inherent_risk")
            ctl = r.real(rf.get("control_effectiveness"), f"{rp}.control_effectiveness")
            tech = r.string(rf.get("technological", ""), f"{rp}.technological")
            non = r.string(rf.get("non_technological", ""), f"{rp}.non_technological")
            if None not in (inh, ctl, tech, non):
                profile = KiotcrfProfile(inh, ctl, tech, non)
                for msg in validate_profile(profile, where=rp):
                    where, _, text = msg.partition(": ")
                    r.bad(f"{where}.{text.split()[0]}", text)
    tags = []
    for i, t in enumerate(r.array(o.get("strategy_tags", []), f"{path}.strategy_tags") or []):
        tag = r.enum(StrategyTag, t, f"{path}.strategy_tags[{i}]")
        if tag is not None:
            tags.append(tag)
    if len(r.problems) > n:
        return None
    return Thing(tid, name, tuple(assets), profile, frozenset(tags), cur)


def _observation(r: _Reader, x, path: str) -> MicroMortObservation | None:
    o = r.obj(x, path, {"label", "vulnerable_count", "total_count", "note", "display_digits"},
              {"label", "vulnerable_count", "total_count"})
    if o is None:
        return None
    n = len(r.problems)
    label = r.string(o.get("label"), f"{path}.label")
    vul = r.integer(o.get("vulnerable_count"), f"{path}.vulnerable_count")
    tot = r.integer(o.get("total_count"), f"{path}.total_count")
    note = r.string(o.get("note", ""), f"{path}.note")
    digits = None
    if "display_digits" in o:
        digits = r.integer(o["display_digits"], f"{path}.display_digits")
        if digits is not None and not 1 <= digits <= 15:
            r.bad(f"{path}.display_digits", "expected 1..15")
    if len(r.problems) > n:
        return None
    obs = MicroMortObservation(label, vul, tot, note, digits)
    for msg in validate_observation(obs):
        fld = "vulnerable_count" if msg.startswith("vulnerable") else "total_count"
        r.bad(f"{path}.{fld}", f"observation {label!r}: {msg}")
    return obs


def _case(r: _Reader, x, path: str) -> NamedCase | None:
    o = r.obj(x, path, {"name", "note", "p_tx_given_y", "p_tx_given_t", "p_tx", "p_t", "states"},
              {"name", "p_tx_given_y", "p_tx_given_t"})
    if o is None:
        return None
    n = len(r.problems)
    name = r.string(o.get("name"), f"{path}.name")
    note = r.string(o.get("note", ""), f"{path}.note")
    a = r.probability(o.get("p_tx_given_y"), f"{path}.p_tx_given_y")
    b = r.probability(o.get("p_tx_given_t"), f"{path}.p_tx_given_t")
    p_tx = r.probability(o["p_tx"], f"{path}.p_tx") if o.get("p_tx") is not None else None
    p_t = r.probability(o["p_t"], f"{path}.p_t") if o.get("p_t") is not None else None
    states = {}
    raw_states = o.get("states", {})
    st = r.obj(raw_states, f"{path}.states", set(raw_states) if isinstance(raw_states, dict) else set())
    for label in sorted(st or {}):
        sp = f"{path}.states.{label}"
        e = r.obj(st[label], sp, {"p_joint_given_state", "p_t_given_state"},
                  {"p_joint_given_state", "p_t_given_state"})
        if e is not None:
            j = r.probability(e.get("p_joint_given_state"), f"{sp}.p_joint_given_state")
            m = r.probability(e.get("p_t_given_state"), f"{sp}.p_t_given_state")
            states[label] = StateEntry(j, m)
    if len(r.problems) > n:
        return None
    case = VertexProbabilityCase(a, b, p_tx, p_t, states)
    for msg in validate_probability_case(case):
        r.bad(f"{path}.p_tx", msg)
    return NamedCase(name, case, note)


def _unique(r: _Reader, labels, path: str, what: str) -> None:
    seen = set()
    for i, label in enumerate(labels):
        if label in seen:
            r.bad(f"{path}[{i}]", f"duplicate {what} {label!r}")
        seen.add(label)


def parse_scenario(doc) -> Scenario:
    r = _Reader()
    o = r.obj(doc, "", _TOP_KEYS, {"schema_version", "label"})
    if o is None:
        raise ValidationError(r.problems)
    version = r.string(o.get("schema_version"), "schema_version")
    if version is not None and version != SCENARIO_SCHEMA_VERSION:
        r.bad("schema_version", f"unrecognised schema version {version!r} (supported: {SCENARIO_SCHEMA_VERSION!r})")
    label = r.string(o.get("label"), "label")
    description = r.string(o.get("description", ""), "description")
    notes = tuple(r.string(s, f"notes[{i}]") for i, s in enumerate(r.array(o.get("notes", []), "notes") or []))

    things = [_thing(r, t, f"things[{i}]", "USD")
              for i, t in enumerate(r.array(o.get("things", []), "things") or [])]
    _unique(r, [t.id for t in things if t], "things", "thing id")
    observations = [_observation(r, x, f"observations[{i}]")
                    for i, x in enumerate(r.array(o.get("observations", []), "observations") or [])]
    _unique(r, [x.label for x in observations if x], "observations", "observation label")
    cases = [_case(r, x, f"probability_cases[{i}]")
             for i, x in enumerate(r.array(o.get("probability_cases", []), "probability_cases") or [])]
    _unique(r, [c.name for c in cases if c], "probability_cases", "case name")

    var_config = None
    if o.get("var_config") is not None:
        vc = r.obj(o["var_config"], "var_config", {"paths", "seed", "horizon_months", "confidence"},
                   {"paths", "seed"})
        if vc is not None:
            raw = dict(
                paths=r.integer(vc.get("paths"), "var_config.paths"),
                seed=r.integer(vc.get("seed"), "var_config.seed"),
                horizon_months=r.integer(vc.get("horizon_months", 12), "var_config.horizon_months"),
                confidence=r.real(vc.get("confidence", Decimal("0.95")), "var_config.confidence"),
            )
            if None not in raw.values():
                probs = config_problems(SimpleNamespace(**raw))
                for k, msg in probs:
                    r.bad(f"var_config.{k}", msg)
                if not probs:
                    var_config = VarConfig(**raw)

    history = None
    if o.get("historical_losses") is not None:
        items = r.array(o["historical_losses"], "historical_losses")
        if items is not None:
            history = tuple(r.amount(x, f"historical_losses[{i}]") for i, x in enumerate(items))
            for i, x in enumerate(history):
                if x is not None and x < 0:
                    r.bad(f"historical_losses[{i}]", "loss must be >= 0")
            if not items:
                r.bad("historical_losses", "must not be empty when present")

    wtp = None
    if o.get("wtp_inputs") is not None:
        w = r.obj(o["wtp_inputs"], "wtp_inputs", {"per_unit_wtp", "population", "risk_reduction", "note"},
                  {"per_unit_wtp", "population", "risk_reduction"})
        if w is not None:
            per = r.amount(w.get("per_unit_wtp"), "wtp_inputs.per_unit_wtp")
            pop = r.integer(w.get("population"), "wtp_inputs.population")
            red = r.amount(w.get("risk_reduction"), "wtp_inputs.risk_reduction")
            note = r.string(w.get("note", ""), "wtp_inputs.note")
            if per is not None and per < 0:
                r.bad("wtp_inputs.per_unit_wtp", "must be >= 0")
            if pop is not None and pop <= 0:
                r.bad("wtp_inputs.population", "must be > 0")
            if red is not None and not 0 < red <= 1:
                r.bad("wtp_inputs.risk_reduction", "must lie in (0, 1]")
            wtp = WtpInputs(per, pop, red, note)

    market = None
    if o.get("market_value_inputs") is not None:
        mv = r.obj(o["market_value_inputs"], "market_value_inputs",
                   {"security_spending", "device_count", "note"}, {"security_spending", "device_count"})
        if mv is not None:
            spend = r.amount(mv.get("security_spending"), "market_value_inputs.security_spending")
            devices = r.integer(mv.get("device_count"), "market_value_inputs.device_count")
            note = r.string(mv.get("note", ""), "market_value_inputs.note")
            if spend is not None and spend < 0:
                r.bad("market_value_inputs.security_spending", "must be >= 0")
            if devices is not None and devices <= 0:
                r.bad("market_value_inputs.device_count", "must be > 0")
            market = MarketValueInputs(spend, devices, note)

    grid = None
    if o.get("confidence_grid") is not None:
        items = r.array(o["confidence_grid"], "confidence_grid")
        if items is not None:
            grid = tuple(r.real(x, f"confidence_grid[{i}]") for i, x in enumerate(items))
            for i, c in enumerate(grid):
                if c is not None and not 0 < c < 1:
                    r.bad(f"confidence_grid[{i}]", "must lie strictly between 0 and 1")
            _unique(r, grid, "confidence_grid", "confidence")

    reduction = r.amount(o.get("reduction_percent", Decimal("0.01")), "reduction_percent")
    if reduction is not None and not 0 < reduction <= 1:
        r.bad("reduction_percent", "must lie in (0, 1]")

    if r.problems:
        raise ValidationError(r.problems)
    return Scenario(
        schema_version=version,
        label=label,
        description=description,
        notes=notes,
        things=tuple(things),
        observations=tuple(observations),
        probability_cases=tuple(cases),
        var_config=var_config,
        historical_losses=history,
        wtp_inputs=wtp,
        market_value_inputs=market,
        confidence_grid=grid,
        reduction_percent=reduction,
    )


def loads_scenario(text: str) -> Scenario:
    try:
        doc = jsonio.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return parse_scenario(doc)


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {str(path)!r}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"scenario is not UTF-8: {exc.reason}") from None
    return loads_scenario(text)


def bundled_path(name: str):
    return resources.files("iotmm") / "scenarios" / f"{name}.json"


def load_bundled(name: str) -> Scenario:
    if name not in BUNDLED:
        raise ScenarioError(f"no bundled scenario {name!r}; choose from {', '.join(BUNDLED)}")
    return loads_scenario(bundled_path(name).read_text(encoding="utf-8"))


def _thing_dict(t: Thing) -> dict:
    d = {
        "id": t.id,
        "name": t.name,
        "currency": t.currency,
        "strategy_tags": sorted(tag.value for tag in t.strategy_tags),
        "assets": [
            {
                "id": a.id,
                "name": a.name,
                "value_role": a.value_role.value,
                "origin": a.origin.value,
                "valuation": {"basis": a.valuation.kind.value, "amount": a.valuation.amount},
                "value": a.value,
                "residual_exposure_mm": a.residual_exposure_mm,
                "severity_fraction": a.severity_fraction,
            }
            for a in t.assets
        ],
    }
    if t.risk_factors is not None:
        rf = t.risk_factors
        d["risk_factors"] = {
            "inherent_risk": rf.inherent_risk,
            "control_effectiveness": rf.control_effectiveness,
            "technological": rf.technological,
            "non_technological": rf.non_technological,
        }
    return d


def scenario_to_dict(s: Scenario) -> dict:
    d: dict = {"schema_version": s.schema_version, "label": s.label}
    if s.description:
        d["description"] = s.description
    if s.notes:
        d["notes"] = list(s.notes)
    d["things"] = [_thing_dict(t) for t in s.things]
    d["observations"] = []
    for obs in s.observations:
        od = {"label": obs.label, "vulnerable_count": obs.vulnerable_count, "total_count": obs.total_count}
        if obs.note:
            od["note"] = obs.note
        if obs.display_digits is not None:
            od["display_digits"] = obs.display_digits
        d["observations"].append(od)
    d["probability_cases"] = []
    for nc in s.probability_cases:
        c = nc.case
        cd = {"name": nc.name, "p_tx_given_y": c.p_tx_given_y, "p_tx_given_t": c.p_tx_given_t}
        if c.p_tx is not None:
            cd["p_tx"] = c.p_tx
        if c.p_t is not None:
            cd["p_t"] = c.p_t
        if c.states:
            cd["states"] = {
                k: {"p_joint_given_state": v.p_joint_given_state, "p_t_given_state": v.p_t_given_state}
                for k, v in c.states.items()
            }
        if nc.note:
            cd["note"] = nc.note
        d["probability_cases"].append(cd)
    if s.var_config is not None:
        v = s.var_config
        d["var_config"] = {"paths": v.paths, "seed": v.seed,
                           "horizon_months": v.horizon_months, "confidence": v.confidence}
    if s.confidence_grid is not None:
        d["confidence_grid"] = list(s.confidence_grid)
    if s.historical_losses is not None:
        d["historical_losses"] = list(s.historical_losses)
    if s.wtp_inputs is not None:
        w = s.wtp_inputs
        d["wtp_inputs"] = {"per_unit_wtp": w.per_unit_wtp, "population": w.population,
                           "risk_reduction": w.risk_reduction}
        if w.note:
            d["wtp_inputs"]["note"] = w.note
    if s.market_value_inputs is not None:
        m = s.market_value_inputs
        d["market_value_inputs"] = {"security_spending": m.security_spending, "device_count": m.device_count}
        if m.note:
            d["market_value_inputs"]["note"] = m.note
    d["reduction_percent"] = s.reduction_percent
    return d


def dump_scenario(s: Scenario) -> str:
    return jsonio.dumps(scenario_to_dict(s))
