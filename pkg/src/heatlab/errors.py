"""Exception hierarchy for the heatlab package.

Every error raised deliberately by the library derives from HeatLabError so
callers can catch one type at the CLI boundary.
"""

from __future__ import annotations


class HeatLabError(Exception):
    """Base class for all heatlab errors."""


class ConfigError(HeatLabError):
    """Invalid configuration value or malformed config file."""


class NonconvergenceError(HeatLabError):
    """The inner fixed-point sweep of an implicit step failed to converge."""

    def __init__(self, message: str, *, step_index: int, time: float, last_delta: float):
        super().__init__(message)
        self.step_index = step_index
        self.time = time
        self.last_delta = last_delta


class PositivityViolationError(HeatLabError):
    """A solver iterate dropped below the admissible floor."""

    def __init__(self, message: str, *, step_index: int, time: float, min_value: float):
        super().__init__(message)
        self.step_index = step_index
        self.time = time
        self.min_value = min_value


class KernelDomainError(HeatLabError):
    """Heat-kernel evaluation requested below the trusted truncation time."""


class ContractionError(HeatLabError):
    """Picard iteration is not contractive on the requested slab."""


class ConstructionError(HeatLabError):
    """A barrier family's defining inequalities cannot be closed."""


class CertificationSearchError(HeatLabError):
    """Parameter shrinking exhausted its budget without certification."""

    def __init__(self, message: str, *, trace: list[dict]):
        super().__init__(message)
        self.trace = trace


class OrderingError(HeatLabError):
    """Monotonicity in the regularization parameter was violated."""

    def __init__(self, message: str, *, rung: int, worst_gap: float):
        super().__init__(message)
        self.rung = rung
        self.worst_gap = worst_gap


class SchemaError(HeatLabError):
    """An artifact file does not match its declared schema."""
