"""GHZ state preparation: all-to-all, linear, adaptive and hybrid circuits."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from ..models.circuit import Circuit, GateKind

logger = logging.getLogger(__name__)


class GhzFamily(Enum):
    ALL_TO_ALL = "all"
    LINEAR = "linear"
    ADAPTIVE = "adaptive"
    HYBRID_ALL = "hybrid-all"
    HYBRID_LINEAR = "hybrid-linear"


HYBRID_FAMILIES = (GhzFamily.HYBRID_ALL, GhzFamily.HYBRID_LINEAR)


@dataclass(frozen=True)
class GhzVariant:
    """A GHZ construction; hybrid families carry the block count ``k``."""

    family: GhzFamily
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family in HYBRID_FAMILIES:
            if self.k is None:
                raise ValueError("Hybrid variants require a block count k")
            if self.k < 2:
                raise ValueError("Hybrid variants require k >= 2")
        elif self.k is not None:
            raise ValueError(f"{self.family.value} does not take a block count")

    @property
    def is_hybrid(self) -> bool:
        return self.family in HYBRID_FAMILIES

    @property
    def block_pattern(self) -> GhzFamily:
        """Non-adaptive pattern used inside the blocks of a hybrid variant."""
        if self.family is GhzFamily.HYBRID_ALL:
            return GhzFamily.ALL_TO_ALL
        if self.family is GhzFamily.HYBRID_LINEAR:
            return GhzFamily.LINEAR
        return self.family

    @classmethod
    def parse(cls, name: str, k: Optional[int] = None) -> "GhzVariant":
        """Build a variant from its CLI name (``all``, ``linear``, ``hybrid-all`` ...)."""
        try:
            family = GhzFamily(name.lower())
        except ValueError:
            choices = ", ".join(f.value for f in GhzFamily)
            raise ValueError(f"Unknown GHZ variant {name!r}; choose one of {choices}") from None
        return cls(family, k if family in HYBRID_FAMILIES else None)

    def __str__(self) -> str:
        return f"{self.family.value}(k={self.k})" if self.is_hybrid else self.family.value


ALL_TO_ALL = GhzVariant(GhzFamily.ALL_TO_ALL)
LINEAR = GhzVariant(GhzFamily.LINEAR)
ADAPTIVE = GhzVariant(GhzFamily.ADAPTIVE)


def hybrid_all(k: int) -> GhzVariant:
    return GhzVariant(GhzFamily.HYBRID_ALL, k)


def hybrid_linear(k: int) -> GhzVariant:
    return GhzVariant(GhzFamily.HYBRID_LINEAR, k)


def _emit_all_to_all(circuit: Circuit, qubits: Sequence[int]) -> None:
    # each layer doubles the number of qubits holding the GHZ state
    circuit.h(qubits[0])
    span = 1
    while span < len(qubits):
        for i in range(span):
            if i + span < len(qubits):
                circuit.cnot(qubits[i], qubits[i + span])
        span *= 2


def _emit_linear(circuit: Circuit, qubits: Sequence[int]) -> None:
    # grows outward from the middle, two CNOTs per layer; qubits[0] joins last
    n = len(qubits)
    start = (n + 1) // 2 - 1
    circuit.h(qubits[start])
    if n == 1:
        return
    circuit.cnot(qubits[start], qubits[start + 1])
    for i in range(n // 2 - 1):
        circuit.cnot(qubits[start - i], qubits[start - i - 1])
        circuit.cnot(qubits[start + 1 + i], qubits[start + 2 + i])
    if n % 2 == 1:
        circuit.cnot(qubits[1], qubits[0])


def emit_ghz_block(circuit: Circuit, qubits: Sequence[int], pattern: GhzFamily) -> None:
    """Append a non-adaptive GHZ preparation on ``qubits`` using ``pattern``."""
    if pattern is GhzFamily.ALL_TO_ALL:
        _emit_all_to_all(circuit, qubits)
    elif pattern is GhzFamily.LINEAR:
        _emit_linear(circuit, qubits)
    else:
        raise ValueError(f"{pattern.value} is not a non-adaptive block pattern")


def emit_fusion(circuit: Circuit, blocks: Sequence[Sequence[int]]) -> List[int]:
    """Fuse GHZ blocks into one GHZ state by measuring boundary parities.

    One auxiliary qubit per adjacent pair takes the parity of the two block
    roots (``block[0]``) and is measured. Prefix parities of the outcomes tell
    which blocks disagree with block 0; those blocks get an X on every qubit.

    Returns:
        The auxiliary qubits
    """
    aux = circuit.add_qubits(len(blocks) - 1, register="aux")
    for b, ancilla in enumerate(aux):
        circuit.cnot(blocks[b][0], ancilla)
    for b, ancilla in enumerate(aux):
        circuit.cnot(blocks[b + 1][0], ancilla)
    outcomes = [circuit.measure(ancilla) for ancilla in aux]
    flips = circuit.compute("prefix_parity", outcomes)
    for b in range(1, len(blocks)):
        for qubit in blocks[b]:
            circuit.cond(flips[b - 1], GateKind.X, qubit)
    return aux


def build_ghz(n: int, variant: GhzVariant) -> Circuit:
    """Build an n-qubit GHZ preparation circuit.

    Args:
        n: Number of data qubits
        variant: Construction to use

    Returns:
        Circuit whose ``data`` register ends in (|0..0> + |1..1>)/sqrt(2)

    Raises:
        ValueError: If n is too small for the variant or k does not divide n
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    if variant.family is GhzFamily.ADAPTIVE and n < 2:
        raise ValueError("Adaptive GHZ requires n >= 2")
    if variant.is_hybrid:
        assert variant.k is not None
        if n % variant.k != 0:
            raise ValueError(f"Block count k={variant.k} must divide n={n}")

    circuit = Circuit(0, name=f"ghz-{variant}-{n}")
    data = circuit.add_qubits(n, register="data")

    if variant.family in (GhzFamily.ALL_TO_ALL, GhzFamily.LINEAR):
        emit_ghz_block(circuit, data, variant.family)
    elif variant.family is GhzFamily.ADAPTIVE:
        for qubit in data:
            circuit.h(qubit)
        emit_fusion(circuit, [[qubit] for qubit in data])
    else:
        assert variant.k is not None
        size = n // variant.k
        blocks = [data[b * size:(b + 1) * size] for b in range(variant.k)]
        for block in blocks:
            emit_ghz_block(circuit, block, variant.block_pattern)
        emit_fusion(circuit, blocks)

    logger.debug("Built %r", circuit)
    return circuit
