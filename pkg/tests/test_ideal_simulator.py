"""Tests for noiseless simulation with feedforward."""

import itertools

import numpy as np
import pytest

from src.adaptiveprep.models.circuit import Circuit
from src.adaptiveprep.models.exceptions import QubitCapExceededError
from src.adaptiveprep.protocols.ghz import (
    ADAPTIVE,
    ALL_TO_ALL,
    LINEAR,
    build_ghz,
    hybrid_all,
    hybrid_linear,
)
from src.adaptiveprep.protocols.subroutines import (
    build_fanout,
    build_mu_state,
    build_or_reduction,
    build_parity,
    mu_phase,
)
from src.adaptiveprep.protocols.w_state import build_w_approx_postselect, build_w_nonadaptive
from src.adaptiveprep.simulation.ideal import StatevectorSimulator, peak_live_qubits
from src.adaptiveprep.simulation.statevector import (
    basis_state,
    fidelity,
    ghz_vector,
    mu_vector,
    product_state,
    w_vector,
)


def with_input(bits, circuit: Circuit) -> Circuit:
    """Prefix X gates preparing ``bits`` on the first qubits of ``circuit``."""
    prepared = Circuit(len(bits))
    for qubit, bit in enumerate(bits):
        if bit:
            prepared.x(qubit)
    return prepared.compose(circuit)


EXACT = 1e-10


def hybrid_variants(n: int):
    """Hybrid variants with a block count dividing n."""
    for k in range(2, n + 1):
        if n % k == 0:
            yield hybrid_all(k)
            yield hybrid_linear(k)


class TestGhzPreparation:
    """Test cases for GHZ fidelity on every branch."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.simulator = StatevectorSimulator()

    def assert_every_branch_is_ghz(self, n: int, variant) -> None:
        circuit = build_ghz(n, variant)
        branches = self.simulator.run_exact(circuit)
        assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=EXACT)
        for branch in branches:
            assert fidelity(branch.data_vector(circuit), ghz_vector(n)) >= 1 - EXACT, branch.outcomes

    @pytest.mark.parametrize("variant", [ALL_TO_ALL, LINEAR], ids=str)
    def test_non_adaptive(self, variant) -> None:
        for n in range(1, 11):
            self.assert_every_branch_is_ghz(n, variant)

    def test_adaptive_every_branch(self) -> None:
        """Test that feedforward fixes every measurement record."""
        for n in range(2, 7):
            assert len(self.simulator.run_exact(build_ghz(n, ADAPTIVE))) == 2 ** (n - 1)
            self.assert_every_branch_is_ghz(n, ADAPTIVE)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [7, 8, 9, 10])
    def test_large_adaptive_every_branch(self, n: int) -> None:
        self.assert_every_branch_is_ghz(n, ADAPTIVE)

    def test_adaptive_sampled_trajectories(self) -> None:
        circuit = build_ghz(10, ADAPTIVE)
        for seed in range(4):
            state = self.simulator.final_state(circuit, seed=seed)
            assert fidelity(state.vector(circuit.data_qubits), ghz_vector(10)) >= 1 - EXACT

    def test_hybrid_every_branch(self) -> None:
        for n in range(2, 9):
            for variant in hybrid_variants(n):
                self.assert_every_branch_is_ghz(n, variant)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [9, 10])
    def test_large_hybrid_every_branch(self, n: int) -> None:
        for variant in hybrid_variants(n):
            self.assert_every_branch_is_ghz(n, variant)

    def test_sampled_support(self) -> None:
        """Test that sampled adaptive GHZ shots are all-zero or all-one."""
        histogram = self.simulator.run_sampled(build_ghz(4, ADAPTIVE), shots=200, seed=1)
        assert histogram.support() == {"0000", "1111"}
        assert histogram.shots == 200

    def test_trajectory_sampling_when_branches_exceed_limit(self) -> None:
        simulator = StatevectorSimulator(max_branches=2)
        histogram = simulator.run_sampled(build_ghz(4, ADAPTIVE), shots=30, seed=2)
        assert histogram.support() <= {"0000", "1111"}
        assert histogram.shots == 30


class TestWPreparation:
    """Test cases for W state circuits."""

    def test_cascade_fidelity(self) -> None:
        simulator = StatevectorSimulator()
        for n in range(2, 9):
            circuit = build_w_nonadaptive(n)
            (branch,) = simulator.run_exact(circuit)
            assert fidelity(branch.data_vector(circuit), w_vector(n)) >= 1 - EXACT

    def test_postselected_shots_have_odd_weight(self) -> None:
        histogram = StatevectorSimulator().run_sampled(
            build_w_approx_postselect(4), shots=400, seed=3, postselect=("parity", 1)
        )
        assert all(key.count("1") % 2 == 1 for key in histogram.support())
        assert histogram.acceptance_rate == pytest.approx(7 / 32, abs=0.08)

    def test_unknown_flag(self) -> None:
        with pytest.raises(ValueError, match="no flag named"):
            StatevectorSimulator().run_sampled(build_ghz(3, LINEAR), 10, postselect=("parity", 1))


class TestSubroutines:
    """Test cases for fanout, parity and mu-state semantics."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.simulator = StatevectorSimulator()

    def test_fanout_on_basis_inputs(self) -> None:
        """Test that every target is XORed with the control on every branch."""
        for n in range(2, 5):
            for bits in itertools.product([0, 1], repeat=n):
                circuit = with_input(bits, build_fanout(n))
                expected = [bits[0]] + [b ^ bits[0] for b in bits[1:]]
                for branch in self.simulator.run_exact(circuit):
                    vector = branch.data_vector(circuit)
                    assert fidelity(vector, basis_state(expected)) >= 1 - EXACT

    def test_fanout_copies_control_to_far_targets(self) -> None:
        circuit = with_input((1, 0, 1, 0, 0, 1), build_fanout(6))
        for seed in range(6):
            state = self.simulator.final_state(circuit, seed=seed)
            assert fidelity(state.vector(circuit.data_qubits), basis_state("110110")) >= 1 - EXACT

    def test_fanout_from_plus_state_is_ghz(self) -> None:
        prepared = Circuit(4)
        prepared.h(0)
        circuit = prepared.compose(build_fanout(4))
        for branch in self.simulator.run_exact(circuit):
            assert fidelity(branch.data_vector(circuit), ghz_vector(4)) >= 1 - EXACT

    def test_parity_on_basis_inputs(self) -> None:
        for n in range(2, 5):
            for bits in itertools.product([0, 1], repeat=n):
                circuit = with_input(bits, build_parity(n))
                expected = [bits[0] ^ (sum(bits[1:]) % 2)] + list(bits[1:])
                state = self.simulator.final_state(circuit, seed=sum(bits))
                assert fidelity(state.vector(circuit.data_qubits), basis_state(expected)) >= 1 - EXACT

    def test_mu_state(self) -> None:
        """Test the mu output for every 3-bit input and both phase levels."""
        for k in (1, 2):
            for bits in itertools.product([0, 1], repeat=3):
                circuit = with_input(bits, build_mu_state(k, 3))
                work = circuit.registers["mu_work"]
                order = circuit.data_qubits + work
                expected = product_state(
                    basis_state(bits), mu_vector(mu_phase(k), sum(bits)), basis_state([0] * (len(work) - 1))
                )
                state = self.simulator.final_state(circuit, seed=k)
                assert fidelity(state.vector(order), expected) >= 1 - EXACT

    @pytest.mark.parametrize("bits", [(0, 0, 0), (1, 0, 1), (0, 1, 0)])
    def test_or_reduction_heads(self, bits) -> None:
        """Test that some mu qubit is set exactly when the input is non-zero."""
        circuit = with_input(bits, build_or_reduction(3))
        state = self.simulator.final_state(circuit, seed=5)
        weight = sum(bits)
        for k, head in enumerate(circuit.registers["mu"], start=1):
            expected = (1 - np.cos(mu_phase(k) * weight)) / 2
            assert state.probability_one(head) == pytest.approx(expected, abs=1e-9)
        for copy in circuit.registers["copies"]:
            assert state.probability_one(copy) == pytest.approx(0.0, abs=1e-9)


class TestLimits:
    """Test cases for simulator limits."""

    def test_qubit_cap(self) -> None:
        simulator = StatevectorSimulator(max_qubits=4)
        with pytest.raises(QubitCapExceededError, match="needs 5 live qubits"):
            simulator.run_exact(build_ghz(5, LINEAR))

    def test_peak_live_qubits(self) -> None:
        assert peak_live_qubits(build_ghz(4, ADAPTIVE)) == 7
        assert peak_live_qubits(build_ghz(5, LINEAR)) == 5

    def test_invalid_limits(self) -> None:
        with pytest.raises(ValueError, match="max_qubits must be positive"):
            StatevectorSimulator(max_qubits=0)
        with pytest.raises(ValueError, match="max_branches must be positive"):
            StatevectorSimulator(max_branches=0)

    def test_invalid_shots(self) -> None:
        with pytest.raises(ValueError, match="shots must be positive"):
            StatevectorSimulator().run_sampled(build_ghz(2, LINEAR), shots=0)
