"""IoT MicroMort ratios and willingness-to-pay arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from . import display
from .errors import CountExceedsPopulation, InputError, ZeroPopulation
from .inventory import MICROMORTS_PER_UNIT, MicroMortObservation, to_decimal


@dataclass(frozen=True)
class IotmmResult:
    """Vulnerable share of a device population, kept as an exact rational."""

    label: str
    ratio: Fraction
    display_digits: int = display.RATIO_DIGITS

    @property
    def micromorts(self) -> Fraction:
        return self.ratio * MICROMORTS_PER_UNIT

    @property
    def display(self) -> str:
        return display.ratio(self.ratio, self.display_digits)


@dataclass(frozen=True)
class WtpAssessment:
    per_unit_wtp: Decimal
    population: int
    risk_reduction: Decimal

    @property
    def aggregate(self) -> Decimal:
        return self.per_unit_wtp * self.population

    @property
    def expected_deaths_avoided(self) -> Decimal:
        return self.risk_reduction * self.population


def _positive_int(name: str, n) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f"{name} must be an integer, got {n!r}")
    if n <= 0:
        raise ZeroPopulation(f"{name} must be positive, got {n}")
    return n


def _non_negative(name: str, x) -> Decimal:
    d = to_decimal(x)
    if not d.is_finite() or d < 0:
        raise InputError(f"{name} must be a finite amount >= 0, got {x!r}")
    return d


def _unit_interval(name: str, x) -> Decimal:
    d = to_decimal(x)
    if not d.is_finite() or not 0 < d <= 1:
        raise InputError(f"{name} must lie in (0, 1], got {x!r}")
    return d


def iot_micromort(obs: MicroMortObservation, display_digits: int = display.RATIO_DIGITS) -> IotmmResult:
    total = _positive_int("total_count", obs.total_count)
    vulnerable = obs.vulnerable_count
    if isinstance(vulnerable, bool) or not isinstance(vulnerable, int) or vulnerable < 0:
        raise InputError(f"vulnerable_count must be a non-negative integer, got {vulnerable!r}")
    if vulnerable > total:
        raise CountExceedsPopulation(
            f"{obs.label}: {vulnerable} vulnerable devices out of a population of {total}"
        )
    return IotmmResult(obs.label, Fraction(vulnerable, total), display_digits)


def market_value_per_micromort(security_spending, device_count: int) -> Decimal:
    """Security spending spread evenly across the connected-device population."""
    spending = _non_negative("security_spending", security_spending)
    n = _positive_int("device_count", device_count)
    return display.exact_decimal(Fraction(spending) / n)


def aggregate_willingness_to_pay(per_unit_wtp, population: int, risk_reduction) -> WtpAssessment:
    return WtpAssessment(
        _non_negative("per_unit_wtp", per_unit_wtp),
        _positive_int("population", population),
        _unit_interval("risk_reduction", risk_reduction),
    )


def micromort_reduction_value(loss_limit, reduction_percent) -> Decimal:
    """Linear price of cutting the 12-month loss limit by ``reduction_percent``.

    ``reduction_percent`` is a fraction: 0.01 means one percent.
    """
    return _non_negative("loss_limit", loss_limit) * _unit_interval("reduction_percent", reduction_percent)
