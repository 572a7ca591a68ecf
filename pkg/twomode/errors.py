"""
errors and exceptions
"""

from __future__ import annotations


class ConfigurationError(Exception):
    """
    Error raised when a configuration problem is encountered
    """


class InvalidArgumentError(ValueError):
    """
    Error raised when an argument lies outside the domain of an operation
    (e.g. a squeezing parameter outside ``(0, 1)`` or a cutoff below one)
    """


class TruncationError(Exception):
    """
    Error raised when the squared norm lost past a Fock cutoff exceeds
    the declared truncation tolerance
    """

    def __init__(self, loss: float, tolerance: float, context: str = "") -> None:
        self.loss = loss
        self.tolerance = tolerance
        self.context = context
        detail = f" ({context})" if context else ""
        super().__init__(
            f"truncation loss {loss:.3e} exceeds tolerance {tolerance:.1e}{detail}"
        )


class PrecisionError(Exception):
    """
    Error raised when a floating point result fails its own consistency
    check (e.g. cancellation in an alternating sum)
    """

    def __init__(self, defect: float, tolerance: float, context: str = "") -> None:
        self.defect = defect
        self.tolerance = tolerance
        self.context = context
        detail = f" ({context})" if context else ""
        super().__init__(
            f"numerical defect {defect:.3e} exceeds tolerance {tolerance:.1e}{detail}"
        )


class ResourceError(Exception):
    """
    Error raised when a dense computation would exceed the configured
    dimension limit
    """

    def __init__(self, dimension: int, limit: int) -> None:
        self.dimension = dimension
        self.limit = limit
        super().__init__(
            f"flattened dimension {dimension} exceeds the dense limit of {limit}"
        )


class ReportError(Exception):
    """
    Error raised when a report writer fails to emit its output
    """

    def __init__(self, report_error: Exception) -> None:
        self.report_error = report_error
        super().__init__(str(report_error))
