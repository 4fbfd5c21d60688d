"""Seven-term worst-case error model.

Every elementary operation succeeds with a fixed probability: single-qubit
gates ``p_s``, CNOTs ``p_d``, measurements ``p_m``, and a qubit idling through
a layer of single-qubit gates, CNOTs, measurements or classical computation
succeeds with ``p_is``, ``p_id``, ``p_im`` or ``p_ic``. Classical computation
itself never fails. A circuit succeeds only if every site succeeds, so its
success probability is a product of powers of the seven terms.
"""

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .exceptions import CalibrationError
from .schedule import Layer, LayerClass, Schedule

logger = logging.getLogger(__name__)

Exponent = Union[int, Fraction]

TERM_NAMES = ("p_s", "p_is", "p_d", "p_id", "p_m", "p_im", "p_ic")
EXPONENT_NAMES = ("e_s", "e_is", "e_d", "e_id", "e_m", "e_im", "e_ic")


@dataclass(frozen=True)
class ExponentVector:
    """Exponents of the seven success terms: the symbolic success probability."""

    e_s: Exponent = 0
    e_is: Exponent = 0
    e_d: Exponent = 0
    e_id: Exponent = 0
    e_m: Exponent = 0
    e_im: Exponent = 0
    e_ic: Exponent = 0

    def __post_init__(self) -> None:
        for name in EXPONENT_NAMES:
            value = getattr(self, name)
            if not isinstance(value, (int, Fraction)) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer or a Fraction")
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")

    @classmethod
    def from_values(cls, values: Tuple[Exponent, ...]) -> "ExponentVector":
        return cls(*values)

    def as_tuple(self) -> Tuple[Exponent, ...]:
        return tuple(getattr(self, name) for name in EXPONENT_NAMES)

    def as_dict(self) -> Dict[str, Exponent]:
        return {name: getattr(self, name) for name in EXPONENT_NAMES}

    @property
    def is_integral(self) -> bool:
        return all(
            isinstance(v, int) or v.denominator == 1 for v in self.as_tuple()
        )

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        return ExponentVector(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def scaled(self, factor: int) -> "ExponentVector":
        """Exponents of the probability raised to ``factor``."""
        if factor < 0:
            raise ValueError("Scale factor must be non-negative")
        return ExponentVector(*(factor * v for v in self.as_tuple()))

    def delta(self, other: "ExponentVector") -> Dict[str, Exponent]:
        """Per-term difference ``self - other`` (may be negative)."""
        return {
            name: a - b
            for name, a, b in zip(EXPONENT_NAMES, self.as_tuple(), other.as_tuple())
        }

    def __str__(self) -> str:
        parts = []
        for term, value in zip(TERM_NAMES, self.as_tuple()):
            if value:
                parts.append(term if value == 1 else f"{term}^{value}")
        return " ".join(parts) if parts else "1"


class SuccessTerms:
    """Numeric values of the seven success terms (``p_c`` is fixed at 1)."""

    def __init__(
        self,
        p_s: float = 1.0,
        p_is: float = 1.0,
        p_d: float = 1.0,
        p_id: float = 1.0,
        p_m: float = 1.0,
        p_im: float = 1.0,
        p_ic: float = 1.0,
    ) -> None:
        """Initialize success terms with validation.

        Raises:
            ValueError: If any term lies outside [0, 1]
        """
        self._validate_parameters(p_s, p_is, p_d, p_id, p_m, p_im, p_ic)
        self.p_s = p_s
        self.p_is = p_is
        self.p_d = p_d
        self.p_id = p_id
        self.p_m = p_m
        self.p_im = p_im
        self.p_ic = p_ic

    def _validate_parameters(self, *values: float) -> None:
        for value, name in zip(values, TERM_NAMES):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be between 0 and 1")

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(getattr(self, name) for name in TERM_NAMES)

    def as_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in TERM_NAMES}

    def assume_easy(self) -> "SuccessTerms":
        """First-order assumptions: p_s = p_is = 1, p_m = p_d, p_im = p_ic = p_id."""
        return SuccessTerms(1.0, 1.0, self.p_d, self.p_id, self.p_d, self.p_id, self.p_id)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SuccessTerms) and self.as_tuple() == other.as_tuple()

    def __repr__(self) -> str:
        body = ", ".join(f"{name}={value:.6g}" for name, value in self.as_dict().items())
        return f"SuccessTerms({body})"


class DeviceCalibration:
    """Raw device numbers from which success terms are derived."""

    REQUIRED_FIELDS = ("p_s_err", "p_d_err", "p_m_err", "t2_us", "t_2q_ns", "t_meas_ns")
    OPTIONAL_FIELDS = ("t_classical_ns", "name")

    def __init__(
        self,
        p_s_err: float,
        p_d_err: float,
        p_m_err: float,
        t2_us: float,
        t_2q_ns: float,
        t_meas_ns: float,
        t_classical_ns: Optional[float] = None,
        name: str = "device",
    ) -> None:
        """Initialize a calibration with validation.

        Args:
            p_s_err: Single-qubit gate error probability
            p_d_err: CNOT error probability
            p_m_err: Measurement error probability
            t2_us: T2 decay time in microseconds
            t_2q_ns: CNOT duration in nanoseconds
            t_meas_ns: Measurement duration in nanoseconds
            t_classical_ns: Classical feedforward duration; defaults to t_meas_ns
            name: Device label used in reports

        Raises:
            CalibrationError: If any value is out of range
        """
        self._validate_parameters(p_s_err, p_d_err, p_m_err, t2_us, t_2q_ns, t_meas_ns, t_classical_ns)
        self.p_s_err = float(p_s_err)
        self.p_d_err = float(p_d_err)
        self.p_m_err = float(p_m_err)
        self.t2_us = float(t2_us)
        self.t_2q_ns = float(t_2q_ns)
        self.t_meas_ns = float(t_meas_ns)
        self.t_classical_ns = float(t_meas_ns if t_classical_ns is None else t_classical_ns)
        self.name = name

    def _validate_parameters(
        self,
        p_s_err: float,
        p_d_err: float,
        p_m_err: float,
        t2_us: float,
        t_2q_ns: float,
        t_meas_ns: float,
        t_classical_ns: Optional[float],
    ) -> None:
        for value, name in [(p_s_err, "p_s_err"), (p_d_err, "p_d_err"), (p_m_err, "p_m_err")]:
            if not 0.0 <= value <= 1.0:
                raise CalibrationError(f"{name} must be between 0 and 1")
        if t2_us <= 0:
            raise CalibrationError("T2 must be positive")
        for value, name in [(t_2q_ns, "t_2q_ns"), (t_meas_ns, "t_meas_ns")]:
            if value < 0:
                raise CalibrationError(f"{name} must be non-negative")
        if t_classical_ns is not None and t_classical_ns < 0:
            raise CalibrationError("t_classical_ns must be non-negative")

    @property
    def t2_ns(self) -> float:
        return self.t2_us * 1000.0

    @property
    def t_1q_ns(self) -> float:
        """Single-qubit gate time implied by p_s under the T2 decay model."""
        if self.p_s_err >= 1.0:
            return math.inf
        return -self.t2_ns * math.log1p(-self.p_s_err)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeviceCalibration":
        """Build a calibration from a JSON-style mapping with exact field names.

        Raises:
            CalibrationError: If fields are missing, unknown or not numeric
        """
        if not isinstance(data, dict):
            raise CalibrationError("Calibration must be a JSON object")
        missing = [key for key in cls.REQUIRED_FIELDS if key not in data]
        if missing:
            raise CalibrationError(f"Calibration is missing field(s): {', '.join(missing)}")
        unknown = [k for k in data if k not in cls.REQUIRED_FIELDS + cls.OPTIONAL_FIELDS]
        if unknown:
            raise CalibrationError(f"Unknown calibration field(s): {', '.join(unknown)}")
        values: Dict[str, Any] = {}
        for key in cls.REQUIRED_FIELDS + ("t_classical_ns",):
            if key not in data:
                continue
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise CalibrationError(f"Calibration field {key} must be a number")
            values[key] = float(value)
        if "name" in data:
            values["name"] = str(data["name"])
        return cls(**values)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "DeviceCalibration":
        """Load a calibration JSON file.

        Raises:
            CalibrationError: If the file is unreadable, not JSON or fails the schema
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise CalibrationError(f"Cannot read calibration {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CalibrationError(f"Calibration {path} is not valid JSON: {exc}") from exc
        calibration = cls.from_dict(data)
        if "name" not in data:
            calibration.name = path.stem
        logger.info("Loaded calibration %s from %s", calibration.name, path)
        return calibration

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_s_err": self.p_s_err,
            "p_d_err": self.p_d_err,
            "p_m_err": self.p_m_err,
            "t2_us": self.t2_us,
            "t_2q_ns": self.t_2q_ns,
            "t_meas_ns": self.t_meas_ns,
            "t_classical_ns": self.t_classical_ns,
            "name": self.name,
        }


def terms_from_calibration(calibration: DeviceCalibration) -> SuccessTerms:
    """Convert a calibration into success terms.

    Gate terms are one minus the error probabilities; idle terms decay as
    exp(-t / T2) over the duration of the layer.
    """
    p_s = 1.0 - calibration.p_s_err
    return SuccessTerms(
        p_s=p_s,
        p_is=p_s,
        p_d=1.0 - calibration.p_d_err,
        p_id=math.exp(-calibration.t_2q_ns / calibration.t2_ns),
        p_m=1.0 - calibration.p_m_err,
        p_im=math.exp(-calibration.t_meas_ns / calibration.t2_ns),
        p_ic=math.exp(-calibration.t_meas_ns / calibration.t2_ns),
    )


def evaluate(exponents: ExponentVector, terms: SuccessTerms) -> float:
    """Success probability: product of every term raised to its exponent."""
    return math.prod(
        term ** float(exponent) if isinstance(exponent, Fraction) else term ** exponent
        for term, exponent in zip(terms.as_tuple(), exponents.as_tuple())
    )


def cost_controlled_u() -> ExponentVector:
    """Exponents of a controlled single-qubit gate: three 1q gates and two CNOTs."""
    return ExponentVector(e_s=3, e_is=3, e_d=2)


def layer_exponents(layer: Layer, worst_case_corrections: bool = True) -> ExponentVector:
    """Exponent contribution of one layer.

    In a SINGLE layer holding c conditional corrections, the worst case charges
    ceil(c/2) of them as executed gates; otherwise every correction is charged.
    """
    live = len(layer.live)
    if layer.layer_class is LayerClass.SINGLE:
        corrections = layer.conditional_count
        charged = (corrections + 1) // 2 if worst_case_corrections else corrections
        active = len(layer.ops) - corrections + charged
        return ExponentVector(e_s=active, e_is=live - active)
    if layer.layer_class is LayerClass.DOUBLE:
        return ExponentVector(e_d=len(layer.ops), e_id=len(layer.idle))
    if layer.layer_class is LayerClass.MEASURE:
        return ExponentVector(e_m=len(layer.ops), e_im=len(layer.idle))
    return ExponentVector(e_ic=live)


def count_exponents(schedule: Schedule, worst_case_corrections: bool = True) -> ExponentVector:
    """Layer-counting oracle: sum of the per-layer exponent contributions."""
    total = ExponentVector()
    for layer in schedule:
        total = total + layer_exponents(layer, worst_case_corrections)
    return total


def exponent_trace(
    schedule: Schedule, worst_case_corrections: bool = True
) -> List[Tuple[int, LayerClass, ExponentVector]]:
    """Per-layer contributions, for mismatch reports."""
    return [
        (index, layer.layer_class, layer_exponents(layer, worst_case_corrections))
        for index, layer in enumerate(schedule)
    ]
