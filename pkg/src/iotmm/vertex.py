"""Conditional-probability calculus between an IoT vertical (T) and its vertices (Y).

For an attack vector Tx, the vertical and vertex hypotheses are exhaustive
and exclusive (P(Y) + P(T) = 1), so the marginal P(Tx) is a convex mixture
of the two conditionals and can be inverted for P(T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    ComplementViolation,
    DegenerateConditionals,
    InconsistentJoint,
    InvalidProbability,
    OutOfRange,
    Underdetermined,
    ZeroMarginal,
)
from .inventory import PROBABILITY_TOLERANCE, VertexProbabilityCase, validate_probability_case


def _check(name: str, p: float) -> float:
    if not (isinstance(p, (int, float)) and math.isfinite(p) and 0 <= p <= 1):
        raise InvalidProbability(f"{name}={p!r} is not a probability in [0, 1]")
    return float(p)


def conditional(joint: float, marginal: float) -> float:
    """P(A|B) = P(A & B) / P(B)."""
    joint = _check("joint", joint)
    marginal = _check("marginal", marginal)
    if marginal == 0:
        raise ZeroMarginal("conditioning event has probability 0")
    if joint > marginal:
        raise InconsistentJoint(f"joint {joint!r} exceeds marginal {marginal!r}")
    return min(1.0, joint / marginal)


def total_probability(p_tx_given_y: float, p_y: float, p_tx_given_t: float, p_t: float) -> float:
    a = _check("p_tx_given_y", p_tx_given_y)
    b = _check("p_tx_given_t", p_tx_given_t)
    p_y = _check("p_y", p_y)
    p_t = _check("p_t", p_t)
    if abs(p_y + p_t - 1) > PROBABILITY_TOLERANCE:
        raise ComplementViolation(f"P(Y) + P(T) = {p_y + p_t!r}, expected 1")
    mix = a * p_y + b * p_t
    # rounding can push the mixture a hair outside its hull
    return min(max(mix, min(a, b)), max(a, b))


def invert_vertical_probability(p_tx: float, p_tx_given_y: float, p_tx_given_t: float) -> float:
    """Solve the total-probability identity for P(T).

    P(T) = (P(Tx) - P(Tx|Y)) / (P(Tx|T) - P(Tx|Y))
    """
    p_tx = _check("p_tx", p_tx)
    a = _check("p_tx_given_y", p_tx_given_y)
    b = _check("p_tx_given_t", p_tx_given_t)
    if a == b:
        raise DegenerateConditionals(
            f"P(Tx|T) equals P(Tx|Y) ({a!r}); P(T) is not identifiable"
        )
    if not min(a, b) <= p_tx <= max(a, b):
        raise OutOfRange(
            f"P(Tx)={p_tx!r} lies outside [{min(a, b)!r}, {max(a, b)!r}] spanned by the conditionals"
        )
    if p_tx == a:
        return 0.0
    if p_tx == b:
        return 1.0
    return min(1.0, max(0.0, (p_tx - a) / (b - a)))


def state_conditioned(p_joint_given_state: float, p_t_given_state: float) -> float:
    """P(Tx|T,C) = P(Tx & T|C) / P(T|C) for one state C of the vertical."""
    return conditional(p_joint_given_state, p_t_given_state)


@dataclass
class CaseReport:
    """Every probability derivable from a case, tagged input or derived."""

    values: dict[str, float] = field(default_factory=dict)
    origin: dict[str, str] = field(default_factory=dict)
    states: dict[str, float] = field(default_factory=dict)

    def put(self, name: str, value: float, origin: str) -> None:
        self.values[name] = value
        self.origin[name] = origin

    @property
    def inputs(self) -> list[str]:
        return sorted(k for k, v in self.origin.items() if v == "input")

    @property
    def derived(self) -> list[str]:
        return sorted(k for k, v in self.origin.items() if v == "derived")


def evaluate_case(case: VertexProbabilityCase) -> CaseReport:
    problems = validate_probability_case(case)
    if problems:
        if any("disagrees" in p for p in problems):
            raise ComplementViolation("; ".join(problems))
        raise InvalidProbability("; ".join(problems))
    if case.p_t is None and case.p_tx is None:
        raise Underdetermined("case needs at least one of p_t or p_tx")

    rep = CaseReport()
    rep.put("p_tx_given_y", float(case.p_tx_given_y), "input")
    rep.put("p_tx_given_t", float(case.p_tx_given_t), "input")
    if case.p_t is not None:
        p_t = float(case.p_t)
        rep.put("p_t", p_t, "input")
    else:
        try:
            p_t = invert_vertical_probability(case.p_tx, case.p_tx_given_y, case.p_tx_given_t)
        except (DegenerateConditionals, OutOfRange) as exc:
            raise type(exc)(f"p_t: {exc}") from exc
        rep.put("p_t", p_t, "derived")
    p_y = 1.0 - p_t
    rep.put("p_y", p_y, "derived")
    if case.p_tx is not None:
        rep.put("p_tx", float(case.p_tx), "input")
    else:
        rep.put("p_tx", total_probability(case.p_tx_given_y, p_y, case.p_tx_given_t, p_t), "derived")
    rep.put("p_tx_and_y", case.p_tx_given_y * p_y, "derived")
    rep.put("p_tx_and_t", case.p_tx_given_t * p_t, "derived")
    for label in sorted(case.states):
        entry = case.states[label]
        try:
            rep.states[label] = state_conditioned(entry.p_joint_given_state, entry.p_t_given_state)
        except (ZeroMarginal, InconsistentJoint) as exc:
            raise type(exc)(f"states[{label}]: {exc}") from exc
    return rep
