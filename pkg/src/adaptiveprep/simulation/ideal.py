"""Noiseless simulation of circuits with mid-circuit measurement and feedforward.

Operations run in program order. Measurement outcomes are either enumerated
(every branch with its exact probability) or sampled with a seeded generator.
"""

import logging
from dataclasses import dataclass
from typing import Collection, Dict, List, Optional, Set, Tuple

import numpy as np

from ..models.circuit import (
    CLASSICAL_FUNCTIONS,
    SINGLE_QUBIT_KINDS,
    Circuit,
    GateKind,
    GateOp,
    check_valid,
)
from ..models.exceptions import QubitCapExceededError
from .histogram import ShotHistogram, bitstring
from .statevector import ZERO_PROBABILITY, StateVector

logger = logging.getLogger(__name__)

DEFAULT_MAX_QUBITS = 24
DEFAULT_MAX_BRANCHES = 4096
CAP_HINT = "raise it with --max-qubits or pick a smaller n"


@dataclass
class Branch:
    """One measurement record and the state it leaves behind.

    ``probability`` multiplies the probabilities of the enumerated outcomes
    only; sampled outcomes contribute no weight.
    """

    probability: float
    outcomes: Dict[int, int]
    state: StateVector

    def flag(self, circuit: Circuit, name: str) -> int:
        return self.outcomes[circuit.flags[name]]

    def data_vector(self, circuit: Circuit) -> np.ndarray:
        return self.state.vector(circuit.data_qubits)


def peak_live_qubits(circuit: Circuit) -> int:
    """Largest number of simultaneously allocated qubits during program-order execution."""
    live: Set[int] = set()
    peak = 0
    for op in circuit.ops:
        live.update(op.qubits)
        peak = max(peak, len(live))
        if op.kind is GateKind.MEASURE and op.consume:
            live.discard(op.qubits[0])
    return peak


def check_qubit_cap(circuit: Circuit, max_qubits: int) -> int:
    required = peak_live_qubits(circuit)
    if required > max_qubits:
        raise QubitCapExceededError(required, max_qubits, CAP_HINT)
    return required


def apply_unitary(state: StateVector, op: GateOp) -> None:
    """Apply a gate (not a measurement, computation or conditional) to ``state``."""
    if op.kind in SINGLE_QUBIT_KINDS:
        state.apply_1q(op.matrix(), op.qubits[0])
    elif op.kind is GateKind.CNOT:
        state.apply_cnot(*op.qubits)
    elif op.kind in (GateKind.CRY, GateKind.CRZ):
        inner = GateOp(GateKind.RY if op.kind is GateKind.CRY else GateKind.RZ, (op.qubits[1],), angle=op.angle)
        state.apply_controlled_1q(inner.matrix(), *op.qubits)
    else:
        raise ValueError(f"{op.kind.value} is not a unitary gate")


def run_classical(op: GateOp, values: Dict[int, int]) -> None:
    assert op.function is not None
    function = CLASSICAL_FUNCTIONS[op.function][0]
    for clbit, value in zip(op.outputs, function([values[c] for c in op.clbits])):
        values[clbit] = value


class StatevectorSimulator:
    """Exact-state and sampled noiseless simulation."""

    def __init__(
        self, max_qubits: int = DEFAULT_MAX_QUBITS, max_branches: int = DEFAULT_MAX_BRANCHES
    ) -> None:
        """Initialize the simulator.

        Args:
            max_qubits: Cap on simultaneously live qubits
            max_branches: Largest number of measurement branches enumerated

        Raises:
            ValueError: If a limit is not positive
        """
        if max_qubits <= 0:
            raise ValueError("max_qubits must be positive")
        if max_branches <= 0:
            raise ValueError("max_branches must be positive")
        self.max_qubits = max_qubits
        self.max_branches = max_branches

    def _enumerated(self, circuit: Circuit, enumerate_clbits: Optional[Collection[int]]) -> Set[int]:
        if enumerate_clbits is not None:
            return set(enumerate_clbits)
        measured = [op.clbits[0] for op in circuit.ops if op.kind is GateKind.MEASURE]
        if 2 ** len(measured) <= self.max_branches:
            return set(measured)
        logger.info(
            "%s has %d measurements; sampling outcomes instead of enumerating",
            circuit.name,
            len(measured),
        )
        return set()

    def run_exact(
        self,
        circuit: Circuit,
        seed: Optional[int] = None,
        enumerate_clbits: Optional[Collection[int]] = None,
        forced: Optional[Dict[int, int]] = None,
    ) -> List[Branch]:
        """Run the circuit and return its measurement branches.

        Args:
            circuit: Valid circuit
            seed: Seed for outcomes that are sampled
            enumerate_clbits: Clbits whose outcomes are enumerated; by default all
                of them when 2^m does not exceed ``max_branches``, otherwise none
            forced: Clbit -> outcome assignments applied by projection

        Returns:
            Branches with non-zero probability

        Raises:
            QubitCapExceededError: If the circuit needs too many live qubits
            ValueError: If a forced outcome has zero probability
        """
        check_valid(circuit)
        check_qubit_cap(circuit, self.max_qubits)
        rng = np.random.default_rng(seed)
        enumerated = self._enumerated(circuit, enumerate_clbits)
        forced = forced or {}
        branches = [Branch(1.0, {}, StateVector())]
        for op in circuit.ops:
            if op.kind is GateKind.MEASURE:
                branches = self._measure(branches, op, enumerated, forced, rng)
                if len(branches) > self.max_branches:
                    raise ValueError(f"More than {self.max_branches} measurement branches")
                continue
            for branch in branches:
                if op.kind is GateKind.CLASSICAL_COMPUTE:
                    run_classical(op, branch.outcomes)
                elif op.kind is GateKind.COND:
                    if branch.outcomes[op.clbits[0]]:
                        branch.state.apply_1q(op.matrix(), op.qubits[0])
                else:
                    apply_unitary(branch.state, op)
        logger.debug("%s: %d branches", circuit.name, len(branches))
        return branches

    def _measure(
        self,
        branches: List[Branch],
        op: GateOp,
        enumerated: Set[int],
        forced: Dict[int, int],
        rng: np.random.Generator,
    ) -> List[Branch]:
        qubit, clbit = op.qubits[0], op.clbits[0]
        result = []
        for branch in branches:
            if clbit in forced:
                branch.state.project(qubit, forced[clbit], remove=op.consume)
                branch.outcomes[clbit] = forced[clbit]
                result.append(branch)
            elif clbit in enumerated:
                p_one = branch.state.probability_one(qubit)
                for outcome, p in ((0, 1.0 - p_one), (1, p_one)):
                    if p <= ZERO_PROBABILITY:
                        continue
                    child = Branch(branch.probability * p, dict(branch.outcomes), branch.state.copy())
                    child.state.project(qubit, outcome, remove=op.consume)
                    child.outcomes[clbit] = outcome
                    result.append(child)
            else:
                outcome = int(rng.random() < branch.state.probability_one(qubit))
                branch.state.project(qubit, outcome, remove=op.consume)
                branch.outcomes[clbit] = outcome
                result.append(branch)
        return result

    def final_state(self, circuit: Circuit, seed: Optional[int] = None) -> StateVector:
        """State of one sampled trajectory."""
        return self.run_exact(circuit, seed=seed, enumerate_clbits=())[0].state

    def run_sampled(
        self,
        circuit: Circuit,
        shots: int,
        seed: Optional[int] = None,
        postselect: Optional[Tuple[str, int]] = None,
    ) -> ShotHistogram:
        """Sample final Z-basis measurements of the data register.

        Args:
            circuit: Valid circuit
            shots: Number of shots
            seed: Seed of the sampler
            postselect: Optional (flag name, required value); other shots are
                counted as rejected

        Returns:
            Histogram over data-qubit bitstrings, leftmost character = first data qubit

        Raises:
            ValueError: If shots is not positive or the flag is unknown
        """
        if shots <= 0:
            raise ValueError("Number of shots must be positive")
        if postselect is not None and postselect[0] not in circuit.flags:
            raise ValueError(f"Circuit has no flag named {postselect[0]!r}")
        data = circuit.data_qubits
        measured = sum(1 for op in circuit.ops if op.kind is GateKind.MEASURE)
        if 2**measured <= self.max_branches:
            return self._sample_mixture(circuit, data, shots, seed, postselect)
        # too many branches: one sampled trajectory per shot
        histogram = ShotHistogram({})
        for child in np.random.SeedSequence(seed).spawn(shots):
            rng = np.random.default_rng(child)
            branch = self.run_exact(circuit, seed=int(rng.integers(2**31)), enumerate_clbits=())[0]
            if postselect is not None and branch.flag(circuit, postselect[0]) != postselect[1]:
                histogram.rejected += 1
                continue
            probabilities = branch.state.marginal_probabilities(data)
            index = rng.choice(len(probabilities), p=probabilities / probabilities.sum())
            histogram.add(bitstring(index, len(data)))
        return histogram

    def _sample_mixture(
        self,
        circuit: Circuit,
        data: List[int],
        shots: int,
        seed: Optional[int],
        postselect: Optional[Tuple[str, int]],
    ) -> ShotHistogram:
        branches = self.run_exact(circuit, seed=seed)
        size = 2 ** len(data)
        distribution = np.zeros(size + 1)
        for branch in branches:
            if postselect is not None and branch.flag(circuit, postselect[0]) != postselect[1]:
                distribution[size] += branch.probability
                continue
            distribution[:size] += branch.probability * branch.state.marginal_probabilities(data)
        distribution /= distribution.sum()
        rng = np.random.default_rng(seed)
        draws = rng.choice(size + 1, size=shots, p=distribution)
        values, counts = np.unique(draws, return_counts=True)
        histogram = ShotHistogram({})
        for value, count in zip(values, counts):
            if value == size:
                histogram.rejected += int(count)
            else:
                histogram.add(bitstring(int(value), len(data)), int(count))
        return histogram
