"""IoT MicroMort risk units and cyber value-at-risk quantification."""

__version__ = "0.1.0"
SCENARIO_SCHEMA_VERSION = "1"
REPORT_SCHEMA_VERSION = "1"

from .errors import ComputationError, InputError, IotmmError  # noqa: E402
