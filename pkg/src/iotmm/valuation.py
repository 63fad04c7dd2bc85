"""Asset composition, total digital value and residual cyber risk."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .errors import InputError, ZeroControlEffectiveness
from .inventory import KiotcrfProfile, Origin, Thing, ValueRole, require_valid


@dataclass(frozen=True)
class CompositionReport:
    """Partition of a Thing's assets by value role and by origin.

    Ratios are value-weighted; ``None`` when the denominator sum is zero.
    """

    core_count: int
    operational_count: int
    core_value_sum: Decimal
    operational_value_sum: Decimal
    digitised_count: int
    born_digital_count: int
    digitised_value_sum: Decimal
    born_digital_value_sum: Decimal

    @staticmethod
    def _ratio(num: Decimal, den: Decimal) -> Decimal | None:
        return None if den == 0 else num / den

    @property
    def ca_to_oa_ratio(self) -> Decimal | None:
        return self._ratio(self.core_value_sum, self.operational_value_sum)

    @property
    def da_to_ad_ratio(self) -> Decimal | None:
        return self._ratio(self.digitised_value_sum, self.born_digital_value_sum)


def composition(thing: Thing) -> CompositionReport:
    require_valid(thing)
    core = [a.value for a in thing.assets if a.value_role is ValueRole.CORE]
    ops = [a.value for a in thing.assets if a.value_role is ValueRole.OPERATIONAL]
    dig = [a.value for a in thing.assets if a.origin is Origin.DIGITISED]
    born = [a.value for a in thing.assets if a.origin is Origin.BORN_DIGITAL]
    return CompositionReport(
        len(core), len(ops), sum(core, Decimal(0)), sum(ops, Decimal(0)),
        len(dig), len(born), sum(dig, Decimal(0)), sum(born, Decimal(0)),
    )


def total_digital_value(thing: Thing) -> Decimal:
    """V = sum of core asset values + sum of operational asset values."""
    require_valid(thing)
    return sum((a.value for a in thing.assets), Decimal(0))


def residual_risk(profile: KiotcrfProfile) -> float:
    """Inherent risk divided by control effectiveness (unit-free)."""
    inherent = float(profile.inherent_risk)
    control = float(profile.control_effectiveness)
    if control == 0:
        raise ZeroControlEffectiveness("control_effectiveness is 0; model weak controls as a small positive score")
    if not (inherent > 0 and control > 0) or inherent == float("inf") or control == float("inf"):
        raise InputError(f"risk factors must be finite and positive, got {inherent!r} / {control!r}")
    return inherent / control
