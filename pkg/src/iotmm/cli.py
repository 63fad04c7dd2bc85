"""Batch command line: ``iotmm {micromort,prob,run,var}``.

Exit codes: 0 success, 2 input or validation error, 3 computation error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import REPORT_SCHEMA_VERSION, SCENARIO_SCHEMA_VERSION, __version__, display
from .errors import ComputationError, InputError, IotmmError
from .inventory import MicroMortObservation
from .micromort import iot_micromort
from .report import ScenarioRunError, emit_report, run_scenario
from .scenario import BUNDLED, Scenario, bundled_path, load_scenario, loads_scenario
from .var import QUANTILE_CONVENTION, VarConfig, monte_carlo_var
from .vertex import invert_vertical_probability, state_conditioned, total_probability

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 2, 3


def _exit_code(exc: IotmmError) -> int:
    if isinstance(exc, ScenarioRunError):
        exc = exc.cause
    return EXIT_COMPUTE if isinstance(exc, ComputationError) else EXIT_INPUT


def _load(path: str) -> Scenario:
    p = Path(path)
    if not p.exists() and path in BUNDLED:
        return loads_scenario(bundled_path(path).read_text(encoding="utf-8"))
    return load_scenario(p)


def _apply_overrides(s: Scenario, args) -> tuple[Scenario, dict]:
    flags = {
        "paths": args.paths,
        "seed": args.seed,
        "confidence": args.confidence,
        "horizon_months": args.horizon_months,
    }
    overrides = {k: v for k, v in flags.items() if v is not None}
    if not overrides:
        return s, {}
    base = s.var_config
    if base is None:
        missing = [k for k in ("paths", "seed") if k not in overrides]
        if missing:
            raise InputError(f"scenario has no var_config; pass --{' and --'.join(missing)}")
        cfg = VarConfig(**overrides)
    else:
        cfg = dataclasses.replace(base, **overrides)
    return dataclasses.replace(s, var_config=cfg), overrides


def cmd_micromort(args) -> int:
    obs = MicroMortObservation(args.label, args.vulnerable, args.total)
    res = iot_micromort(obs, args.digits)
    print(f"label={res.label}")
    print(f"ratio={res.display}")
    print(f"ratio_exact={res.ratio.numerator}/{res.ratio.denominator}")
    print(f"ratio_full={display.exact_decimal(res.ratio)}")
    print(f"micromorts={display.significant(res.micromorts, 6)}")
    return EXIT_OK


def cmd_prob(args) -> int:
    p = display.probability
    if args.mode == "invert":
        pt = invert_vertical_probability(args.ptx, args.ptx_given_y, args.ptx_given_t)
        print(f"P(T)={p(pt)}")
        print(f"P(Y)={p(1 - pt)}")
    elif args.mode == "forward":
        ptx = total_probability(args.ptx_given_y, 1 - args.pt, args.ptx_given_t, args.pt)
        print(f"P(Tx)={p(ptx)}")
        print(f"P(Y)={p(1 - args.pt)}")
    else:
        print(f"P(Tx|T,C)={p(state_conditioned(args.joint, args.marginal))}")
    return EXIT_OK


def cmd_run(args) -> int:
    scenario, overrides = _apply_overrides(_load(args.scenario), args)
    data = emit_report(run_scenario(scenario, overrides), args.format)
    if args.out:
        try:
            Path(args.out).write_bytes(data)
        except OSError as exc:
            raise InputError(f"cannot write {args.out!r}: {exc.strerror or exc}") from None
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


def cmd_var(args) -> int:
    scenario, overrides = _apply_overrides(_load(args.scenario), args)
    cfg = scenario.var_config
    if cfg is None:
        raise InputError("scenario has no var_config; pass --paths and --seed")
    print(f"scenario={scenario.label}")
    print(f"quantile_convention={QUANTILE_CONVENTION}")
    for key, value in sorted(overrides.items()):
        print(f"override.{key}={value}")
    for thing in scenario.things:
        try:
            s = monte_carlo_var(thing, cfg, workers=args.workers)
        except IotmmError as exc:
            raise ScenarioRunError(f"thing/{thing.id}", exc) from exc
        print()
        print(f"thing={thing.id}")
        for f in dataclasses.fields(s):
            print(f"{f.name}={getattr(s, f.name)!r}")
    return EXIT_OK


def _probability(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iotmm", description="IoT MicroMort and cyber value-at-risk engine.")
    parser.add_argument(
        "--version", action="version",
        version=f"iotmm {__version__} (scenario schema {SCENARIO_SCHEMA_VERSION}, report schema {REPORT_SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mm = sub.add_parser("micromort", help="IoT MicroMort ratio of a device population")
    mm.add_argument("--vulnerable", type=int, required=True)
    mm.add_argument("--total", type=int, required=True)
    mm.add_argument("--label", default="")
    mm.add_argument("--digits", type=int, default=display.RATIO_DIGITS, help="significant figures in ratio=")
    mm.set_defaults(func=cmd_micromort)

    prob = sub.add_parser("prob", help="vertical/vertex conditional probabilities")
    modes = prob.add_subparsers(dest="mode", required=True)
    inv = modes.add_parser("invert", help="derive P(T) from P(Tx) and both conditionals")
    inv.add_argument("--ptx", type=_probability, required=True)
    fwd = modes.add_parser("forward", help="derive P(Tx) from P(T) and both conditionals")
    fwd.add_argument("--pt", type=_probability, required=True)
    for p in (inv, fwd):
        p.add_argument("--ptx-given-y", type=_probability, required=True)
        p.add_argument("--ptx-given-t", type=_probability, required=True)
    st = modes.add_parser("state", help="P(Tx|T,C) from P(Tx & T|C) and P(T|C)")
    st.add_argument("--joint", type=_probability, required=True)
    st.add_argument("--marginal", type=_probability, required=True)
    prob.set_defaults(func=cmd_prob)

    def var_flags(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file or bundled scenario name")
        p.add_argument("--paths", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--confidence", type=_probability)
        p.add_argument("--horizon-months", type=int)

    run = sub.add_parser("run", help="run a scenario and write its assessment report")
    var_flags(run)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--out")
    run.set_defaults(func=cmd_run)

    var = sub.add_parser("var", help="Monte Carlo loss distribution summary for each thing")
    var_flags(var)
    var.add_argument("--workers", type=int, default=1)
    var.set_defaults(func=cmd_var)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IotmmError as exc:
        print(f"iotmm: error: {exc}", file=sys.stderr)
        return _exit_code(exc)


def _entry() -> None:
    sys.exit(main())
