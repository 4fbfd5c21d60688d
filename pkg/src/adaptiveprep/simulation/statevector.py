"""Dense statevector over a dynamic set of qubits.

Qubits are allocated lazily in |0> the first time a gate touches them and are
dropped when a consuming measurement projects them out, so the tensor only
ever spans the qubits that are currently live.
"""

from functools import reduce
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

NORM_TOLERANCE = 1e-10
ZERO_PROBABILITY = 1e-14


class StateVector:
    """Amplitudes stored as a tensor of shape (2,)*k plus the qubit of each axis."""

    def __init__(self, qubits: Iterable[int] = ()) -> None:
        self._axes: List[int] = []
        self.tensor = np.ones((), dtype=complex)
        for qubit in qubits:
            self.ensure(qubit)

    @property
    def qubits(self) -> List[int]:
        return list(self._axes)

    @property
    def num_qubits(self) -> int:
        return len(self._axes)

    def __contains__(self, qubit: int) -> bool:
        return qubit in self._axes

    def copy(self) -> "StateVector":
        duplicate = StateVector()
        duplicate._axes = list(self._axes)
        duplicate.tensor = self.tensor.copy()
        return duplicate

    def ensure(self, qubit: int) -> int:
        """Return the axis of ``qubit``, allocating it in |0> if needed."""
        if qubit in self._axes:
            return self._axes.index(qubit)
        self.tensor = np.stack([self.tensor, np.zeros_like(self.tensor)], axis=-1)
        self._axes.append(qubit)
        return len(self._axes) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensor))

    # gates

    def apply_1q(self, matrix: np.ndarray, qubit: int) -> None:
        axis = self.ensure(qubit)
        moved = np.tensordot(matrix, self.tensor, axes=([1], [axis]))
        self.tensor = np.moveaxis(moved, 0, axis)

    def apply_2q(self, matrix: np.ndarray, first: int, second: int) -> None:
        """Apply a 4x4 matrix with ``first`` as the most significant qubit."""
        a = self.ensure(first)
        b = self.ensure(second)
        gate = np.asarray(matrix, dtype=complex).reshape(2, 2, 2, 2)
        moved = np.tensordot(gate, self.tensor, axes=([2, 3], [a, b]))
        self.tensor = np.moveaxis(moved, [0, 1], [a, b])

    def _control_slice(self, control: int) -> tuple:
        index = [slice(None)] * self.num_qubits
        index[self._axes.index(control)] = 1
        return tuple(index)

    def apply_cnot(self, control: int, target: int) -> None:
        c = self.ensure(control)
        t = self.ensure(target)
        index = self._control_slice(control)
        sub_axis = t if t < c else t - 1
        self.tensor[index] = np.flip(self.tensor[index], axis=sub_axis).copy()

    def apply_controlled_1q(self, matrix: np.ndarray, control: int, target: int) -> None:
        c = self.ensure(control)
        t = self.ensure(target)
        index = self._control_slice(control)
        sub_axis = t if t < c else t - 1
        moved = np.tensordot(matrix, self.tensor[index], axes=([1], [sub_axis]))
        self.tensor[index] = np.moveaxis(moved, 0, sub_axis)

    # measurement

    def probability_one(self, qubit: int) -> float:
        if qubit not in self._axes:
            return 0.0
        index = [slice(None)] * self.num_qubits
        index[self._axes.index(qubit)] = 1
        return float(np.sum(np.abs(self.tensor[tuple(index)]) ** 2))

    def project(self, qubit: int, outcome: int, remove: bool = False) -> float:
        """Collapse ``qubit`` onto ``outcome`` and renormalize.

        Args:
            qubit: Measured qubit
            outcome: 0 or 1
            remove: Drop the qubit from the state afterwards

        Returns:
            Probability of the outcome before the collapse

        Raises:
            ValueError: If the outcome has zero probability
        """
        axis = self.ensure(qubit)
        p_one = self.probability_one(qubit)
        probability = p_one if outcome else 1.0 - p_one
        if probability <= ZERO_PROBABILITY:
            raise ValueError(f"Outcome {outcome} on qubit {qubit} has zero probability")
        index = [slice(None)] * self.num_qubits
        index[axis] = outcome
        if remove:
            self.tensor = self.tensor[tuple(index)] / np.sqrt(probability)
            del self._axes[axis]
        else:
            index[axis] = 1 - outcome
            self.tensor[tuple(index)] = 0.0
            self.tensor = self.tensor / np.sqrt(probability)
        return probability

    # views

    def vector(self, order: Optional[Sequence[int]] = None) -> np.ndarray:
        """Amplitude vector with ``order[0]`` as the most significant qubit.

        Qubits in ``order`` that were never touched count as |0>.

        Raises:
            ValueError: If a live qubit is missing from ``order``
        """
        if order is None:
            order = sorted(self._axes)
        missing = [q for q in self._axes if q not in order]
        if missing:
            raise ValueError(f"Live qubits {missing} are not in the requested order")
        state = self.copy()
        for qubit in order:
            state.ensure(qubit)
        permutation = [state._axes.index(q) for q in order]
        return np.transpose(state.tensor, permutation).reshape(-1)

    def marginal_probabilities(self, order: Sequence[int]) -> np.ndarray:
        """Outcome distribution of measuring ``order`` (other qubits traced out)."""
        state = self.copy()
        for qubit in order:
            state.ensure(qubit)
        probabilities = np.abs(state.tensor) ** 2
        kept = [state._axes.index(q) for q in order]
        others = tuple(axis for axis in range(state.num_qubits) if axis not in kept)
        if others:
            probabilities = probabilities.sum(axis=others)
        remaining = [axis for axis in range(state.num_qubits) if axis not in others]
        permutation = [remaining.index(axis) for axis in kept]
        return np.transpose(probabilities, permutation).reshape(-1)


VectorLike = Union[StateVector, np.ndarray]


def _as_vector(state: VectorLike) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.vector()
    return np.asarray(state, dtype=complex).reshape(-1)


def fidelity(state: VectorLike, target: VectorLike) -> float:
    """|<target|state>|^2.

    Raises:
        ValueError: If the dimensions differ
    """
    a = _as_vector(state)
    b = _as_vector(target)
    if a.shape != b.shape:
        raise ValueError(f"Dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(min(1.0, abs(np.vdot(b, a)) ** 2))


def basis_state(bits: Union[str, Sequence[int]]) -> np.ndarray:
    """Computational basis vector; ``bits[0]`` is the most significant qubit."""
    bits = [int(b) for b in bits]
    vector = np.zeros(2 ** len(bits), dtype=complex)
    vector[int("".join(map(str, bits)) or "0", 2)] = 1.0
    return vector


def product_state(*factors: np.ndarray) -> np.ndarray:
    return reduce(np.kron, factors, np.ones(1, dtype=complex))


def ghz_vector(n: int) -> np.ndarray:
    vector = np.zeros(2**n, dtype=complex)
    vector[0] = vector[-1] = 1 / np.sqrt(2)
    return vector


def w_vector(n: int) -> np.ndarray:
    vector = np.zeros(2**n, dtype=complex)
    for position in range(n):
        vector[1 << (n - 1 - position)] = 1 / np.sqrt(n)
    return vector


def mu_vector(phi: float, weight: int) -> np.ndarray:
    """((1 + e^{i phi c})|0> + (1 - e^{i phi c})|1>)/2 for Hamming weight c."""
    phase = np.exp(1j * phi * weight)
    return np.array([(1 + phase) / 2, (1 - phase) / 2], dtype=complex)
