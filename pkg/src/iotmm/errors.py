"""Exception hierarchy.

``InputError`` covers out-of-domain inputs (CLI exit code 2);
``ComputationError`` covers inputs that are individually valid but
whose combination leaves a quantity undefined (CLI exit code 3).
"""


class IotmmError(Exception):
    """Base class for every error raised by the engine."""


class InputError(IotmmError, ValueError):
    pass


class ComputationError(IotmmError, ArithmeticError):
    pass


class InvalidProbability(InputError):
    pass


class ZeroPopulation(InputError):
    pass


class CountExceedsPopulation(InputError):
    pass


class ZeroControlEffectiveness(InputError):
    pass


class EmptyHistory(InputError):
    pass


class InvalidInventory(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InvalidConfig(InputError):
    pass


class ZeroMarginal(ComputationError):
    pass


class InconsistentJoint(ComputationError):
    pass


class ComplementViolation(ComputationError):
    pass


class DegenerateConditionals(ComputationError):
    pass


class OutOfRange(ComputationError):
    pass


class Underdetermined(ComputationError):
    pass


class TooLarge(ComputationError):
    pass


class UnsupportedFormat(InputError):
    pass


class ScenarioError(InputError):
    pass


class ParseError(ScenarioError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(ScenarioError):
    """Scenario failed validation; ``problems`` is a list of (field_path, message)."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.problems))
