"""Tests for the worst-case Monte Carlo engine."""

import math
from pathlib import Path

import numpy as np
import pytest

from src.adaptiveprep.models.error_model import (
    DeviceCalibration,
    SuccessTerms,
    count_exponents,
    evaluate,
    terms_from_calibration,
)
from src.adaptiveprep.models.exceptions import QubitCapExceededError
from src.adaptiveprep.models.gates import is_unitary
from src.adaptiveprep.protocols.ghz import ADAPTIVE, LINEAR, build_ghz
from src.adaptiveprep.protocols.w_state import build_w_approx_postselect, build_w_nonadaptive
from src.adaptiveprep.simulation.ideal import peak_live_qubits
from src.adaptiveprep.simulation.noisy import (
    NoisyRunReport,
    WorstCaseMonteCarlo,
    haar_random_unitary,
)

BRISBANE = Path(__file__).resolve().parent.parent / "brisbane.json"


class TestHaarUnitary:
    """Test cases for haar_random_unitary."""

    def test_unitary(self) -> None:
        rng = np.random.default_rng(0)
        for dim in (2, 4):
            matrix = haar_random_unitary(dim, rng)
            assert matrix.shape == (dim, dim)
            assert is_unitary(matrix)

    def test_seeded(self) -> None:
        first = haar_random_unitary(2, np.random.default_rng(3))
        second = haar_random_unitary(2, np.random.default_rng(3))
        assert np.allclose(first, second)

    def test_phases_are_spread(self) -> None:
        """Test that the diagonal phase correction removes the QR bias."""
        rng = np.random.default_rng(11)
        phases = [np.angle(haar_random_unitary(2, rng)[0, 0]) for _ in range(400)]
        assert np.mean(np.array(phases) < 0) == pytest.approx(0.5, abs=0.1)

    @pytest.mark.slow
    def test_first_moment(self) -> None:
        """Test that |U00|^2 averages to 1/2 over many dimension-2 samples."""
        rng = np.random.default_rng(2)
        weights = [abs(haar_random_unitary(2, rng)[0, 0]) ** 2 for _ in range(100_000)]
        assert np.mean(weights) == pytest.approx(0.5, abs=0.01)

    def test_invalid_dimension(self) -> None:
        with pytest.raises(ValueError, match="Dimension must be positive"):
            haar_random_unitary(0, np.random.default_rng(0))


class TestWorstCaseMonteCarlo:
    """Test cases for WorstCaseMonteCarlo."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.terms = terms_from_calibration(DeviceCalibration.from_json(BRISBANE))

    def test_sites_match_counting_oracle(self) -> None:
        """Test that there is one error site per charged exponent."""
        for circuit in (build_ghz(6, ADAPTIVE), build_ghz(7, LINEAR), build_w_nonadaptive(4)):
            engine = WorstCaseMonteCarlo(circuit, self.terms, track_state=False)
            exponents = count_exponents(engine.schedule, worst_case_corrections=False)
            assert len(engine.sites) == sum(exponents.as_tuple())

    def test_predicted_success(self) -> None:
        engine = WorstCaseMonteCarlo(build_ghz(6, ADAPTIVE), self.terms, track_state=False)
        assert engine.predicted_success == pytest.approx(math.prod(s.probability for s in engine.sites))
        expected = evaluate(count_exponents(engine.schedule, worst_case_corrections=False), self.terms)
        assert engine.predicted_success == pytest.approx(expected)

    def test_perfect_terms_are_always_clean(self) -> None:
        engine = WorstCaseMonteCarlo(build_ghz(4, ADAPTIVE), SuccessTerms())
        report = engine.run_comprehensive_simulation(shots=50, seed=1)
        assert report.clean_shots == 50
        assert report.predicted_success == 1.0
        assert report.histogram.support() == {"0000", "1111"}

    def test_clean_shots_are_ideal(self) -> None:
        """Test that shots without error events land on the GHZ support."""
        terms = SuccessTerms(p_d=0.9, p_id=0.95, p_m=0.9, p_im=0.95, p_ic=0.95)
        report = WorstCaseMonteCarlo(build_ghz(4, ADAPTIVE), terms).run_comprehensive_simulation(200, seed=4)
        assert 0 < report.clean_shots < 200
        assert report.clean_histogram.support() <= {"0000", "1111"}
        assert report.histogram.shots == 200

    def test_failed_measurements_flip_recorded_bits(self) -> None:
        """Test that the feedforward acts on the flipped record."""
        terms = SuccessTerms(p_m=0.0)
        report = WorstCaseMonteCarlo(build_ghz(3, ADAPTIVE), terms).run_comprehensive_simulation(100, seed=2)
        assert report.clean_shots == 0
        assert report.histogram.support() <= {"010", "101"}

    def test_event_only_mode_matches_tracked_events(self) -> None:
        circuit = build_ghz(5, ADAPTIVE)
        tracked = WorstCaseMonteCarlo(circuit, self.terms).run_comprehensive_simulation(300, seed=9)
        events = WorstCaseMonteCarlo(circuit, self.terms, track_state=False).run_comprehensive_simulation(
            300, seed=9
        )
        assert events.clean_shots == tracked.clean_shots
        assert events.histogram is None

    def test_event_log(self) -> None:
        engine = WorstCaseMonteCarlo(build_ghz(5, LINEAR), SuccessTerms(p_d=0.5), log_events=True, track_state=False)
        report = engine.run_comprehensive_simulation(40, seed=0)
        assert len(report.event_log) == 40
        assert all(site.kind == "gate" for shot in report.event_log for site in shot)

    def test_postselection(self) -> None:
        """Test that shots with the wrong parity are counted as rejected."""
        engine = WorstCaseMonteCarlo(build_w_approx_postselect(4), SuccessTerms(), postselect=("parity", 1))
        report = engine.run_comprehensive_simulation(120, seed=6)
        assert report.histogram.rejected > 0
        assert report.histogram.total == 120
        assert all(key.count("1") % 2 == 1 for key in report.histogram.support())

    def test_unknown_flag(self) -> None:
        with pytest.raises(ValueError, match="no flag named"):
            WorstCaseMonteCarlo(build_ghz(3, LINEAR), self.terms, postselect=("parity", 1))

    def test_qubit_cap(self) -> None:
        with pytest.raises(QubitCapExceededError):
            WorstCaseMonteCarlo(build_ghz(6, ADAPTIVE), self.terms, max_qubits=8)
        WorstCaseMonteCarlo(build_ghz(6, ADAPTIVE), self.terms, max_qubits=8, track_state=False)

    def test_invalid_inputs(self) -> None:
        engine = WorstCaseMonteCarlo(build_ghz(3, LINEAR), self.terms, track_state=False)
        with pytest.raises(ValueError, match="shots must be positive"):
            engine.run_multiple_shots(0)
        with pytest.raises(ValueError, match="No shot results"):
            engine.calculate_statistics([])

    @pytest.mark.slow
    @pytest.mark.parametrize("variant", [LINEAR, ADAPTIVE], ids=str)
    @pytest.mark.parametrize("n", [5, 10, 20])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_clean_fraction_within_three_sigma(self, variant, n: int, seed: int) -> None:
        """Test the clean fraction against the oracle product at 4096 shots.

        States are evolved while the circuit stays within 12 live qubits; larger
        runs sample the same error events without the statevector.
        """
        circuit = build_ghz(n, variant)
        engine = WorstCaseMonteCarlo(circuit, self.terms, track_state=peak_live_qubits(circuit) <= 12)
        report = engine.run_comprehensive_simulation(shots=4096, seed=seed)
        assert report.within_sigma(3.0), f"{report.deviation_sigmas():.2f} sigma"

    @pytest.mark.slow
    def test_noisy_linear_histogram_is_bimodal(self) -> None:
        """Test that noisy GHZ shots still cluster near all-zero and all-one."""
        report = WorstCaseMonteCarlo(build_ghz(16, LINEAR), self.terms).run_comprehensive_simulation(256, seed=5)
        weights = report.histogram.hamming()
        extreme = sum(count for weight, count in weights.items() if weight <= 4 or weight >= 12)
        assert extreme / report.histogram.shots >= 0.3


class TestNoisyRunReport:
    """Test cases for NoisyRunReport statistics."""

    def test_sigma(self) -> None:
        report = NoisyRunReport(shots=100, clean_shots=50, predicted_success=0.5)
        assert report.sigma == pytest.approx(0.05)
        assert report.deviation_sigmas() == 0.0
        assert report.within_sigma()

    def test_outside_band(self) -> None:
        report = NoisyRunReport(shots=100, clean_shots=80, predicted_success=0.5)
        assert report.deviation_sigmas() == pytest.approx(6.0)
        assert not report.within_sigma(3.0)

    def test_zero_sigma(self) -> None:
        assert NoisyRunReport(10, 10, 1.0).within_sigma()
        assert math.isinf(NoisyRunReport(10, 9, 1.0).deviation_sigmas())
