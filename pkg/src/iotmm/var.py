"""Cyber value-at-risk: expected loss, Monte Carlo, historical and exact quantiles.

Loss model: each asset independently suffers digital death over the horizon
with probability ``residual_exposure_mm * 1e-6 * horizon_months / 12``
(clamped to 1), losing ``value * severity_fraction``. Quantiles use the
nearest-rank convention everywhere: the ``ceil(confidence * n)``-th smallest
loss, or for an exact distribution the smallest loss whose cumulative
probability reaches ``confidence``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import streams
from .display import exact_decimal
from .errors import EmptyHistory, InputError, InvalidConfig, TooLarge
from .inventory import DigitalAsset, Thing, require_valid

QUANTILE_CONVENTION = "nearest-rank (lower): ceil(confidence * n)-th smallest loss"
MAX_EXHAUSTIVE_ASSETS = 20
_CHUNK_PATHS = 1 << 17


@dataclass(frozen=True)
class VarConfig:
    paths: int
    seed: int
    horizon_months: int = 12
    confidence: float = 0.95

    def __post_init__(self):
        problems = config_problems(self)
        if problems:
            raise InvalidConfig("; ".join(f"{k}: {v}" for k, v in problems))


def config_problems(cfg) -> list[tuple[str, str]]:
    out = []
    for name in ("paths", "seed", "horizon_months"):
        x = getattr(cfg, name)
        if isinstance(x, bool) or not isinstance(x, int):
            out.append((name, f"must be an integer, got {x!r}"))
    if not out:
        if cfg.paths < 1:
            out.append(("paths", "must be >= 1"))
        if not 0 <= cfg.seed <= streams.MAX_SEED:
            out.append(("seed", "must be a 64-bit unsigned integer"))
        if cfg.horizon_months < 1:
            out.append(("horizon_months", "must be >= 1"))
    c = cfg.confidence
    if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c) or not 0 < c < 1:
        out.append(("confidence", f"must lie strictly between 0 and 1, got {c!r}"))
    return out


@dataclass(frozen=True)
class LossDistributionSummary:
    var_at_confidence: float
    confidence: float
    mean_loss: float
    max_loss: float
    path_count: int
    seed: int
    horizon_months: int
    standard_error_estimate: float  # of the mean, not of the quantile


def horizon_probability(asset: DigitalAsset, horizon_months: int = 12) -> Fraction:
    return min(Fraction(1), asset.death_probability * Fraction(horizon_months, 12))


def _confidence_fraction(confidence) -> Fraction:
    c = Fraction(str(confidence))
    if not 0 < c <= 1:
        raise InputError(f"confidence must lie in (0, 1], got {confidence!r}")
    return c


def nearest_rank(n: int, confidence) -> int:
    """1-based rank of the nearest-rank ``confidence`` quantile among ``n`` samples."""
    return max(1, math.ceil(_confidence_fraction(confidence) * n))


def point_var(thing: Thing, horizon_months: int = 12) -> Decimal:
    """Sum of V_i * severity_i * phi(D_i): the exact expected loss over the horizon."""
    require_valid(thing)
    total = sum(
        (Fraction(a.loss_given_death) * horizon_probability(a, horizon_months) for a in thing.assets),
        Fraction(0),
    )
    return exact_decimal(total)


def _loss_vectors(thing: Thing, horizon_months: int) -> tuple[np.ndarray, np.ndarray]:
    p = np.array([float(horizon_probability(a, horizon_months)) for a in thing.assets], dtype=np.float64)
    v = np.array([float(a.loss_given_death) for a in thing.assets], dtype=np.float64)
    return p, v


def _simulate_chunk(seed: int, start: int, count: int, p: np.ndarray, v: np.ndarray) -> np.ndarray:
    words = streams.words53(seed, start, count, len(p))
    losses = np.zeros(count, dtype=np.float64)
    # column-by-column accumulation fixes the summation order to asset order
    for j in range(len(p)):
        dead = words[:, j] < np.uint64(streams.threshold53(p[j]))
        np.add(losses, v[j], out=losses, where=dead)
    return losses


def _partition(paths: int, workers: int) -> list[tuple[int, int]]:
    per_worker = -(-paths // workers)
    size = max(1, min(per_worker, _CHUNK_PATHS))
    return [(s, min(size, paths - s)) for s in range(0, paths, size)]


def simulate_losses(thing: Thing, config: VarConfig, workers: int = 1) -> np.ndarray:
    """Per-path aggregate losses in path order; identical for any ``workers``."""
    require_valid(thing)
    if workers < 1:
        raise InputError("workers must be >= 1")
    p, v = _loss_vectors(thing, config.horizon_months)
    chunks = _partition(config.paths, workers)
    if workers == 1:
        parts = [_simulate_chunk(config.seed, s, n, p, v) for s, n in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _simulate_chunk(config.seed, c[0], c[1], p, v), chunks))
    return np.concatenate(parts)


def empirical_quantile(sorted_losses: np.ndarray, confidence) -> float:
    return float(sorted_losses[nearest_rank(len(sorted_losses), confidence) - 1])


def summarize(losses: np.ndarray, config: VarConfig) -> LossDistributionSummary:
    ordered = np.sort(losses)
    n = len(ordered)
    se = float(np.std(ordered, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return LossDistributionSummary(
        var_at_confidence=empirical_quantile(ordered, config.confidence),
        confidence=config.confidence,
        mean_loss=float(np.mean(ordered)),
        max_loss=float(ordered[-1]),
        path_count=n,
        seed=config.seed,
        horizon_months=config.horizon_months,
        standard_error_estimate=se,
    )


def monte_carlo_var(thing: Thing, config: VarConfig, workers: int = 1) -> LossDistributionSummary:
    return summarize(simulate_losses(thing, config, workers), config)


def var_curve(thing: Thing, config: VarConfig, grid: Sequence[float], workers: int = 1):
    """Summary at ``config.confidence`` plus the VaR at each grid confidence, from one simulation."""
    losses = simulate_losses(thing, config, workers)
    ordered = np.sort(losses)
    return summarize(losses, config), [(c, empirical_quantile(ordered, c)) for c in grid]


def loss_limit_12m(thing: Thing, config: VarConfig, workers: int = 1) -> float:
    """12-month VaR at the configured confidence: the affordable loss limit."""
    twelve = VarConfig(config.paths, config.seed, 12, config.confidence)
    return monte_carlo_var(thing, twelve, workers).var_at_confidence


def exact_loss_distribution(thing: Thing, horizon_months: int = 12) -> list[tuple[float, Fraction]]:
    """Exact loss atoms and probabilities over all 2**n death/survive outcomes.

    Losses accumulate in asset order with float addition, the same order the
    Monte Carlo engine uses, so simulated losses coincide with atoms bit for bit.
    """
    require_valid(thing)
    if len(thing.assets) > MAX_EXHAUSTIVE_ASSETS:
        raise TooLarge(f"{len(thing.assets)} assets; exhaustive enumeration is capped at {MAX_EXHAUSTIVE_ASSETS}")
    dist: dict[float, Fraction] = {0.0: Fraction(1)}
    for asset in thing.assets:
        p = horizon_probability(asset, horizon_months)
        v = float(asset.loss_given_death)
        nxt: dict[float, Fraction] = {}
        for loss, prob in dist.items():
            if p < 1:
                nxt[loss] = nxt.get(loss, Fraction(0)) + prob * (1 - p)
            if p > 0:
                hit = loss + v
                nxt[hit] = nxt.get(hit, Fraction(0)) + prob * p
        dist = nxt
    return sorted(dist.items())


def exact_quantile(atoms: Sequence[tuple[float, Fraction]], confidence) -> float:
    c = _confidence_fraction(confidence)
    cum = Fraction(0)
    for loss, prob in atoms:
        cum += prob
        if cum >= c:
            return loss
    return atoms[-1][0]


def exhaustive_var(thing: Thing, confidence: float, horizon_months: int = 12) -> float:
    return exact_quantile(exact_loss_distribution(thing, horizon_months), confidence)


def historical_var(losses: Sequence, confidence):
    """Nearest-rank quantile of recorded losses; returns an element of ``losses``."""
    if len(losses) == 0:
        raise EmptyHistory("historical VaR needs at least one loss record")
    ordered = sorted(losses)
    return ordered[nearest_rank(len(ordered), confidence) - 1]
