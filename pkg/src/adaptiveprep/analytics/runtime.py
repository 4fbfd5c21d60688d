"""Wall-clock runtime estimates of scheduled circuits."""

import logging
from typing import Dict, Optional

from ..models.error_model import DeviceCalibration
from ..models.schedule import LayerClass, Schedule

logger = logging.getLogger(__name__)


def layer_durations(
    calibration: DeviceCalibration, t_classical_ns: Optional[float] = None
) -> Dict[LayerClass, float]:
    """Duration in nanoseconds of each layer class.

    Single-qubit layers take the gate time implied by p_s under T2 decay;
    classical layers default to the calibration's classical time (the
    measurement time unless set).
    """
    classical = calibration.t_classical_ns if t_classical_ns is None else t_classical_ns
    if classical < 0:
        raise ValueError("Classical compute time must be non-negative")
    return {
        LayerClass.SINGLE: calibration.t_1q_ns,
        LayerClass.DOUBLE: calibration.t_2q_ns,
        LayerClass.MEASURE: calibration.t_meas_ns,
        LayerClass.CLASSICAL: classical,
    }


def runtime_estimate(
    schedule: Schedule,
    calibration: DeviceCalibration,
    t_classical_ns: Optional[float] = None,
) -> float:
    """Sum of layer durations in nanoseconds; 0 for an empty schedule."""
    durations = layer_durations(calibration, t_classical_ns)
    total = sum(durations[layer.layer_class] for layer in schedule)
    logger.debug("Runtime of %d layers: %.1f ns", len(schedule), total)
    return float(total)
