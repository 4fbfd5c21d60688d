"""Exception types raised by the adaptiveprep package."""

from typing import List, Optional


class CircuitValidationError(ValueError):
    """Raised when a circuit violates one of its structural invariants."""

    def __init__(self, violations: List[str]) -> None:
        self.violations = list(violations)
        summary = "; ".join(self.violations[:5])
        if len(self.violations) > 5:
            summary += f"; ... ({len(self.violations) - 5} more)"
        super().__init__(f"Invalid circuit: {summary}")


class CalibrationError(ValueError):
    """Raised for malformed or out-of-range device calibration data."""


class QubitCapExceededError(ValueError):
    """Raised when a simulation needs more live qubits than allowed."""

    def __init__(self, required: int, cap: int, hint: Optional[str] = None) -> None:
        self.required = required
        self.cap = cap
        message = (
            f"simulation needs {required} live qubits, above the statevector cap "
            f"of {cap}"
        )
        if hint:
            message += f"; {hint}"
        super().__init__(message)
