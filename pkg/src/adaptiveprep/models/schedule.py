"""ASAP layering of circuits into homogeneous layers."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from .circuit import (
    SINGLE_QUBIT_KINDS,
    Circuit,
    GateKind,
    GateOp,
    check_valid,
)

logger = logging.getLogger(__name__)


class LayerClass(Enum):
    """Layer classes, in the order ready sets are split."""

    SINGLE = "single"
    DOUBLE = "double"
    MEASURE = "measure"
    CLASSICAL = "classical"


CLASS_ORDER = (LayerClass.SINGLE, LayerClass.DOUBLE, LayerClass.MEASURE, LayerClass.CLASSICAL)


def op_class(op: GateOp) -> LayerClass:
    """Layer class of an operation; conditional gates are SINGLE.

    Raises:
        ValueError: For controlled rotations, which must be decomposed first
    """
    if op.kind in SINGLE_QUBIT_KINDS or op.kind is GateKind.COND:
        return LayerClass.SINGLE
    if op.kind is GateKind.CNOT:
        return LayerClass.DOUBLE
    if op.kind is GateKind.MEASURE:
        return LayerClass.MEASURE
    if op.kind is GateKind.CLASSICAL_COMPUTE:
        return LayerClass.CLASSICAL
    raise ValueError(
        f"{op.kind.value} must be decomposed with decompose_controlled_1q before scheduling"
    )


@dataclass(frozen=True)
class Layer:
    """One time step: ops of a single class plus the active/idle split of live qubits."""

    layer_class: LayerClass
    ops: Tuple[GateOp, ...]
    active: FrozenSet[int]
    idle: FrozenSet[int]

    @property
    def live(self) -> FrozenSet[int]:
        return self.active | self.idle

    @property
    def conditional_count(self) -> int:
        return sum(1 for op in self.ops if op.is_conditional)


@dataclass(frozen=True)
class Schedule:
    """Ordered layers of a circuit."""

    layers: Tuple[Layer, ...]
    num_qubits: int

    def __len__(self) -> int:
        return len(self.layers)

    def __iter__(self) -> Iterator[Layer]:
        return iter(self.layers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def ops(self) -> List[GateOp]:
        """Replay the layers into a flat op list."""
        return [op for layer in self.layers for op in layer.ops]

    def class_counts(self) -> Dict[LayerClass, int]:
        counts = {layer_class: 0 for layer_class in CLASS_ORDER}
        for layer in self.layers:
            counts[layer.layer_class] += 1
        return counts


def dependencies(circuit: Circuit) -> List[Set[int]]:
    """Predecessor op indices of every op.

    Qubit accesses always conflict. A clbit read depends on the last write; a
    write depends on the last write and on every read since.
    """
    last_on_qubit: Dict[int, int] = {}
    last_writer: Dict[int, int] = {}
    readers: Dict[int, List[int]] = {}
    predecessors: List[Set[int]] = []
    for index, op in enumerate(circuit.ops):
        deps: Set[int] = set()
        for qubit in op.qubits:
            if qubit in last_on_qubit:
                deps.add(last_on_qubit[qubit])
            last_on_qubit[qubit] = index
        for clbit in op.reads:
            if clbit in last_writer:
                deps.add(last_writer[clbit])
            readers.setdefault(clbit, []).append(index)
        for clbit in op.writes:
            if clbit in last_writer:
                deps.add(last_writer[clbit])
            deps.update(readers.pop(clbit, []))
            last_writer[clbit] = index
        deps.discard(index)
        predecessors.append(deps)
    return predecessors


def schedule(circuit: Circuit, max_parallel_2q: Optional[int] = None) -> Schedule:
    """Greedy ASAP layering into homogeneous layers.

    Each step takes the ready ops of the first non-empty class in SINGLE,
    DOUBLE, MEASURE, CLASSICAL order and emits them as one layer. All
    declared qubits are live from the start; a consumed qubit leaves the live
    set after its MEASURE layer.

    Args:
        circuit: Valid circuit without controlled rotations
        max_parallel_2q: Optional cap on CNOTs per DOUBLE layer

    Returns:
        The schedule

    Raises:
        CircuitValidationError: If the circuit is invalid
        ValueError: If the cap is not positive or controlled rotations remain
    """
    if max_parallel_2q is not None and max_parallel_2q <= 0:
        raise ValueError("max_parallel_2q must be positive")
    check_valid(circuit)
    classes = [op_class(op) for op in circuit.ops]
    predecessors = dependencies(circuit)
    successors: List[List[int]] = [[] for _ in circuit.ops]
    pending = [len(deps) for deps in predecessors]
    for index, deps in enumerate(predecessors):
        for dep in deps:
            successors[dep].append(index)

    ready = {index for index, count in enumerate(pending) if count == 0}
    live = set(range(circuit.num_qubits))
    layers: List[Layer] = []
    while ready:
        layer_class = next(c for c in CLASS_ORDER if any(classes[i] is c for i in ready))
        chosen = sorted(i for i in ready if classes[i] is layer_class)
        if layer_class is LayerClass.DOUBLE and max_parallel_2q is not None:
            chosen = chosen[:max_parallel_2q]
        ops = tuple(circuit.ops[i] for i in chosen)
        active = frozenset(q for op in ops for q in op.qubits)
        layers.append(Layer(layer_class, ops, active, frozenset(live - active)))
        for op in ops:
            if op.kind is GateKind.MEASURE and op.consume:
                live.discard(op.qubits[0])
        for index in chosen:
            ready.discard(index)
            for successor in successors[index]:
                pending[successor] -= 1
                if pending[successor] == 0:
                    ready.add(successor)

    logger.debug("Scheduled %s into %d layers", circuit.name, len(layers))
    return Schedule(tuple(layers), circuit.num_qubits)

