"""Tests for runtime estimates."""

from pathlib import Path

import pytest

from src.adaptiveprep.analytics.runtime import layer_durations, runtime_estimate
from src.adaptiveprep.models.circuit import Circuit
from src.adaptiveprep.models.error_model import DeviceCalibration
from src.adaptiveprep.models.schedule import LayerClass, schedule
from src.adaptiveprep.protocols.ghz import ADAPTIVE, LINEAR, build_ghz

BRISBANE = Path(__file__).resolve().parent.parent / "brisbane.json"


class TestRuntime:
    """Test cases for runtime_estimate."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.calibration = DeviceCalibration.from_json(BRISBANE)

    def test_linear_55(self) -> None:
        """Test one H layer plus 28 CNOT layers."""
        runtime = runtime_estimate(schedule(build_ghz(55, LINEAR)), self.calibration)
        assert runtime == pytest.approx(18513, abs=100)

    def test_adaptive_55(self) -> None:
        runtime = runtime_estimate(schedule(build_ghz(55, ADAPTIVE)), self.calibration)
        assert runtime == pytest.approx(3986, abs=100)

    def test_classical_override(self) -> None:
        layered = schedule(build_ghz(55, ADAPTIVE))
        default = runtime_estimate(layered, self.calibration)
        assert runtime_estimate(layered, self.calibration, t_classical_ns=0.0) == pytest.approx(
            default - self.calibration.t_meas_ns
        )

    def test_empty_schedule(self) -> None:
        assert runtime_estimate(schedule(Circuit(3)), self.calibration) == 0.0

    def test_negative_classical_time(self) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            layer_durations(self.calibration, t_classical_ns=-1.0)

    def test_durations_by_class(self) -> None:
        durations = layer_durations(self.calibration)
        assert durations[LayerClass.DOUBLE] == 660
        assert durations[LayerClass.CLASSICAL] == durations[LayerClass.MEASURE] == 1300
