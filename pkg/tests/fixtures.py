"""Shared inventories for the oracle and property tests."""

from decimal import Decimal

from iotmm.inventory import DigitalAsset, Thing, ValuationBasis


def asset(i, value, mm, severity=1, role="IoTCA", origin="IoTAD"):
    value = Decimal(str(value))
    return DigitalAsset(f"a{i}", f"asset {i}", role, origin, ValuationBasis("market", value), value,
                        Decimal(str(mm)), Decimal(str(severity)))


def thing(spec, tid="fixture"):
    """``spec`` is a list of (value, micromorts[, severity])."""
    return Thing(tid, tid, [asset(i, *row) for i, row in enumerate(spec)])


# (value, residual exposure in micromorts[, severity])
ORACLE_FIXTURES = {
    "one-asset": [(1000, 80_000)],
    "three-assets": [(500, 50_000), (300, 100_000), (200, 20_000)],
    "five-assets": [(100, 30_000), (200, 40_000), (300, 50_000), (400, 20_000), (500, 10_000)],
    "eight-uniform": [(1000, mm) for mm in (10_000, 20_000, 30_000, 40_000, 50_000, 60_000, 70_000, 80_000)],
    "twelve-mixed": [(250 * (1 + i % 3), 15_000 + 5_000 * i, 1 if i % 4 else "0.5") for i in range(12)],
}
