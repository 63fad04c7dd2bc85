"""Acceptance suite: one PASS/FAIL line per criterion in the terminal summary."""

import bisect
import random
import subprocess
import sys
import time
from decimal import Decimal
from fractions import Fraction

import pytest

import test_inventory
import test_micromort
import test_valuation
import test_var
import test_vertex
from conftest import GOLDEN, ROOT
from fixtures import ORACLE_FIXTURES, thing
from iotmm.inventory import MicroMortObservation
from iotmm.micromort import iot_micromort, market_value_per_micromort
from iotmm.report import emit_report, run_scenario
from iotmm.scenario import BUNDLED, load_bundled
from iotmm.var import VarConfig, exact_loss_distribution, exact_quantile, monte_carlo_var, point_var
from iotmm.vertex import invert_vertical_probability, total_probability


def test_1_published_figures(criterion):
    r17 = iot_micromort(MicroMortObservation("2017", 378 * 10**6, 84 * 10**8))
    r20 = iot_micromort(MicroMortObservation("2020", 900 * 10**6, 204 * 10**8))
    rv = iot_micromort(MicroMortObservation("vigilante", 18 * 10**6, 84 * 10**8))
    got = (r17.ratio, round(Decimal(r20.ratio.numerator) / r20.ratio.denominator, 3),
           round(Decimal(rv.ratio.numerator) / rv.ratio.denominator, 4))
    ok = got == (Fraction(45, 1000), Decimal("0.044"), Decimal("0.0021"))
    criterion("1 micromort regression", ok, f"{r17.ratio} / {got[1]} / {got[2]}")


def test_2_inversion(criterion):
    t = invert_vertical_probability(0.6, 0.9, 0.1)
    rng = random.Random(2024)
    worst, checked = 0.0, 0
    while checked < 10_000:
        a, b, pt = rng.random(), rng.random(), rng.random()
        if abs(a - b) <= 1e-6:
            continue
        back = invert_vertical_probability(total_probability(a, 1 - pt, b, pt), a, b)
        worst = max(worst, abs(back - pt))
        checked += 1
    ok = abs(t - 0.375) <= 1e-12 and worst <= 1e-9
    criterion("2 probability inversion", ok, f"P(T)={t!r}, worst round-trip error {worst:.2e}")


def test_3_market_value(criterion):
    per = market_value_per_micromort(Decimal("840.5e6"), 204 * 10**8)
    rep = run_scenario(load_bundled("gartner-2020"))
    row = rep.get("market_value", "value_per_device")
    ok = (str(per).startswith("0.04120") and row.value == per
          and "0.00412" in row.note and "4120" in row.note)
    criterion("3 market value per micromort", ok, f"{per:.8f}")


def _oracle_fixture(spec, seeds, paths):
    t = thing(spec)
    atoms = exact_loss_distribution(t)
    losses = [loss for loss, _ in atoms]
    target = losses.index(exact_quantile(atoms, 0.95))
    mean = float(point_var(t))
    quantile_hits = mean_hits = 0
    for seed in seeds:
        s = monte_carlo_var(t, VarConfig(paths, seed, confidence=0.95))
        i = bisect.bisect_left(losses, s.var_at_confidence)
        if i < len(losses) and losses[i] == s.var_at_confidence and abs(i - target) <= 1:
            quantile_hits += 1
        if abs(s.mean_loss - mean) <= 4 * s.standard_error_estimate:
            mean_hits += 1
    return quantile_hits, mean_hits


def test_4_oracle_equivalence(criterion):
    seeds = range(100)
    start = time.perf_counter()
    results = {name: _oracle_fixture(spec, seeds, 100_000) for name, spec in ORACLE_FIXTURES.items()}
    elapsed = time.perf_counter() - start
    sizes = sorted(len(spec) for spec in ORACLE_FIXTURES.values())
    ok = (len(results) >= 5 and sizes[0] >= 1 and sizes[-1] <= 12 and elapsed < 10
          and all(q >= 99 and m >= 99 for q, m in results.values()))
    detail = ", ".join(f"{k} {q}/{m}" for k, (q, m) in results.items())
    criterion("4 oracle equivalence", ok, f"quantile/mean hits per 100 seeds: {detail}; {elapsed:.1f}s")


def test_5_determinism(criterion):
    same_reports = all(
        emit_report(run_scenario(load_bundled(n)), fmt) == emit_report(run_scenario(load_bundled(n)), fmt)
        for n in BUNDLED for fmt in ("json", "csv")
    )
    t = load_bundled("gartner-2017").things[0]
    cfg = VarConfig(300_001, 77)
    summaries = {monte_carlo_var(t, cfg, workers=w) for w in (1, 2, 3, 5, 8)}
    criterion("5 determinism", same_reports and len(summaries) == 1,
              f"{len(BUNDLED)} scenarios, {len(summaries)} distinct summaries over worker counts")


PROPERTIES = [
    test_var.test_bounds_and_monotonicity,
    test_micromort.test_scale_invariance,
    test_micromort.test_monotone_in_vulnerable,
    test_micromort.test_micromorts_consistent,
    test_valuation.test_value_additive_and_permutation_invariant,
    test_valuation.test_residual_reconstruction,
    test_valuation.test_residual_decreasing_in_control,
    test_vertex.test_round_trip,
    test_vertex.test_convexity,
    test_inventory.test_validation_is_idempotent_and_order_insensitive,
]


def test_6_property_suites(criterion):
    failed = []
    for prop in PROPERTIES:
        try:
            prop()
        except Exception as exc:  # noqa: BLE001 - any falsified property fails the criterion
            failed.append(f"{prop.__name__}: {type(exc).__name__}")
    criterion("6 property suites", not failed, "; ".join(failed) or f"{len(PROPERTIES)} properties")


def test_7_golden_files(criterion):
    mismatched = []
    for name in BUNDLED:
        for fmt in ("json", "csv"):
            proc = subprocess.run(
                [sys.executable, "-m", "iotmm", "run", "--scenario", f"scenarios/{name}.json", "--format", fmt],
                capture_output=True, cwd=ROOT,
            )
            if proc.returncode != 0 or proc.stdout != (GOLDEN / f"{name}.{fmt}").read_bytes():
                mismatched.append(f"{name}.{fmt}")
    criterion("7 golden files", not mismatched, ", ".join(mismatched) or f"{2 * len(BUNDLED)} files byte-identical")
