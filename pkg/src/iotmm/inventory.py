"""Domain value types for IoT asset inventories and probability inputs.

Construction never raises on out-of-range values: invariant checks are
reported as data by :func:`validate_inventory` and friends, so a scenario
loader can collect every problem in one pass.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Mapping

from .errors import InvalidInventory

MICROMORTS_PER_UNIT = 10**6
PROBABILITY_TOLERANCE = 1e-9


def to_decimal(x) -> Decimal:
    """Coerce an amount to Decimal; floats go through their shortest repr."""
    if isinstance(x, Decimal):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not an amount")
    if isinstance(x, int):
        return Decimal(x)
    if isinstance(x, float):
        return Decimal(repr(x))
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    if isinstance(x, str):
        return Decimal(x)
    raise TypeError(f"cannot interpret {x!r} as an amount")


class ValueRole(str, enum.Enum):
    CORE = "IoTCA"
    OPERATIONAL = "IoTOA"


class Origin(str, enum.Enum):
    DIGITISED = "IoTDA"
    BORN_DIGITAL = "IoTAD"


class BasisKind(str, enum.Enum):
    INTRINSIC = "intrinsic"
    MARKET = "market"
    SUBJECTIVE = "subjective"


class StrategyTag(str, enum.Enum):
    IDENTIFICATION = "identification"
    ESTIMATION = "estimation"
    PRIORITISATION = "prioritisation"


@dataclass(frozen=True)
class ValuationBasis:
    kind: BasisKind
    amount: Decimal

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        object.__setattr__(self, "amount", to_decimal(self.amount))


@dataclass(frozen=True)
class DigitalAsset:
    """One asset D_i: its value V_i and residual exposure in micromorts.

    ``residual_exposure_mm`` is the per-million probability that the asset
    suffers digital death (total loss) over a 12-month period.
    """

    id: str
    name: str
    value_role: ValueRole
    origin: Origin
    valuation: ValuationBasis
    value: Decimal
    residual_exposure_mm: Decimal = Decimal(0)
    severity_fraction: Decimal = Decimal(1)

    def __post_init__(self):
        object.__setattr__(self, "value_role", ValueRole(self.value_role))
        object.__setattr__(self, "origin", Origin(self.origin))
        for name in ("value", "residual_exposure_mm", "severity_fraction"):
            object.__setattr__(self, name, to_decimal(getattr(self, name)))

    @property
    def death_probability(self) -> Fraction:
        """Exact 12-month probability of digital death."""
        return Fraction(self.residual_exposure_mm) / MICROMORTS_PER_UNIT

    @property
    def loss_given_death(self) -> Decimal:
        return self.value * self.severity_fraction


@dataclass(frozen=True)
class KiotcrfProfile:
    inherent_risk: float
    control_effectiveness: float
    technological: str = ""
    non_technological: str = ""


@dataclass(frozen=True)
class Thing:
    id: str
    name: str
    assets: tuple[DigitalAsset, ...] = ()
    risk_factors: KiotcrfProfile | None = None
    strategy_tags: frozenset[StrategyTag] = frozenset()
    currency: str = "USD"

    def __post_init__(self):
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(
            self, "strategy_tags", frozenset(StrategyTag(t) for t in self.strategy_tags)
        )


@dataclass(frozen=True)
class MicroMortObservation:
    label: str
    vulnerable_count: int
    total_count: int
    note: str = ""
    display_digits: int | None = None


@dataclass(frozen=True)
class StateEntry:
    p_joint_given_state: float
    p_t_given_state: float


@dataclass(frozen=True)
class VertexProbabilityCase:
    """Inputs relating an IoT vertical T and its vertices Y for attack vector Tx."""

    p_tx_given_y: float
    p_tx_given_t: float
    p_tx: float | None = None
    p_t: float | None = None
    states: Mapping[str, StateEntry] = field(default_factory=dict)

    def __post_init__(self):
        states = {
            k: v if isinstance(v, StateEntry) else StateEntry(*v)
            for k, v in dict(self.states).items()
        }
        object.__setattr__(self, "states", states)

    def __hash__(self):
        return hash((self.p_tx_given_y, self.p_tx_given_t, self.p_tx, self.p_t,
                     tuple(sorted(self.states.items()))))


def _finite(x) -> bool:
    if isinstance(x, Decimal):
        return x.is_finite()
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def _is_probability(x) -> bool:
    return _finite(x) and 0 <= x <= 1


def validate_asset(asset: DigitalAsset, where: str = "") -> list[str]:
    where = where or f"asset {asset.id!r}"
    out = []
    if not _finite(asset.valuation.amount):
        out.append(f"{where}: valuation.amount is not finite")
    elif asset.valuation.amount < 0:
        out.append(f"{where}: valuation.amount must be >= 0")
    if not _finite(asset.value):
        out.append(f"{where}: value is not finite")
    elif asset.value < 0:
        out.append(f"{where}: value must be >= 0")
    mm = asset.residual_exposure_mm
    if not _finite(mm):
        out.append(f"{where}: residual_exposure_mm is not finite")
    elif mm < 0:
        out.append(f"{where}: residual_exposure_mm must be >= 0")
    elif mm > MICROMORTS_PER_UNIT:
        out.append(f"{where}: residual_exposure_mm exposure exceeds certainty (> 1e6 micromorts)")
    sev = asset.severity_fraction
    if not _finite(sev):
        out.append(f"{where}: severity_fraction is not finite")
    elif not 0 < sev <= 1:
        out.append(f"{where}: severity_fraction must be in (0, 1]")
    return out


def validate_profile(profile: KiotcrfProfile, where: str = "risk_factors") -> list[str]:
    out = []
    for name in ("inherent_risk", "control_effectiveness"):
        x = getattr(profile, name)
        if not _finite(x):
            out.append(f"{where}: {name} is not finite")
        elif x <= 0:
            out.append(f"{where}: {name} must be > 0")
    return out


def validate_inventory(thing: Thing) -> list[str]:
    """Return every invariant violation in ``thing``; empty means valid.

    Violations are sorted so the result does not depend on asset order.
    """
    out = []
    seen: set[str] = set()
    for asset in thing.assets:
        if asset.id in seen:
            out.append(f"asset {asset.id!r}: duplicate asset id")
        seen.add(asset.id)
        out.extend(validate_asset(asset))
    if thing.risk_factors is not None:
        out.extend(validate_profile(thing.risk_factors))
    return sorted(out)


def validate_observation(obs: MicroMortObservation) -> list[str]:
    out = []
    if isinstance(obs.vulnerable_count, bool) or not isinstance(obs.vulnerable_count, int):
        out.append("vulnerable_count must be an integer")
    elif obs.vulnerable_count < 0:
        out.append("vulnerable_count must be >= 0")
    if isinstance(obs.total_count, bool) or not isinstance(obs.total_count, int):
        out.append("total_count must be an integer")
    elif obs.total_count <= 0:
        out.append("total_count must be > 0")
    if not out and obs.vulnerable_count > obs.total_count:
        out.append("vulnerable_count exceeds total_count")
    return out


def validate_probability_case(case: VertexProbabilityCase) -> list[str]:
    out = []
    for name in ("p_tx_given_y", "p_tx_given_t", "p_tx", "p_t"):
        x = getattr(case, name)
        if x is None and name in ("p_tx", "p_t"):
            continue
        if not _is_probability(x):
            out.append(f"{name} must be a probability in [0, 1]")
    for label in sorted(case.states):
        entry = case.states[label]
        for name in ("p_joint_given_state", "p_t_given_state"):
            if not _is_probability(getattr(entry, name)):
                out.append(f"states[{label}].{name} must be a probability in [0, 1]")
    if not out and case.p_t is not None and case.p_tx is not None:
        implied = case.p_tx_given_y * (1 - case.p_t) + case.p_tx_given_t * case.p_t
        if abs(implied - case.p_tx) > PROBABILITY_TOLERANCE:
            out.append(
                f"p_tx={case.p_tx!r} disagrees with total probability {implied!r} implied by p_t"
            )
    return out


def require_valid(thing: Thing) -> None:
    problems = validate_inventory(thing)
    if problems:
        raise InvalidInventory([f"thing {thing.id!r}: {p}" for p in problems])
