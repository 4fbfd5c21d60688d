"""Circuit intermediate representation, validation and text serialization.

A circuit is an ordered program over qubits and classical bits. Besides
unitary gates it holds mid-circuit measurements, classical computations on
measured bits and classically conditioned single-qubit gates (feedforward).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import CircuitValidationError
from .gates import (
    IDENTITY,
    is_unitary,
    matrix_to_entries,
    ry_matrix,
    rz_matrix,
    single_qubit_matrix,
)

logger = logging.getLogger(__name__)


class GateKind(Enum):
    """Operation kinds; the value is the mnemonic of the text format."""

    H = "H"
    X = "X"
    Z = "Z"
    RY = "RY"
    RZ = "RZ"
    GENERIC1Q = "U"
    CNOT = "CNOT"
    CRY = "CRY"
    CRZ = "CRZ"
    MEASURE = "M"
    CLASSICAL_COMPUTE = "COMPUTE"
    COND = "COND"


SINGLE_QUBIT_KINDS = frozenset(
    {GateKind.H, GateKind.X, GateKind.Z, GateKind.RY, GateKind.RZ, GateKind.GENERIC1Q}
)
ROTATION_KINDS = frozenset({GateKind.RY, GateKind.RZ, GateKind.CRY, GateKind.CRZ})
CONTROLLED_ROTATION_KINDS = frozenset({GateKind.CRY, GateKind.CRZ})
TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.CRY, GateKind.CRZ})


def prefix_parity(bits: Sequence[int]) -> Tuple[int, ...]:
    """Running XOR: output i is the parity of bits[0..i]."""
    outputs = []
    running = 0
    for bit in bits:
        running ^= int(bit)
        outputs.append(running)
    return tuple(outputs)


def parity(bits: Sequence[int]) -> Tuple[int, ...]:
    """XOR of all bits as a one-element tuple."""
    result = 0
    for bit in bits:
        result ^= int(bit)
    return (result,)


# name -> (function, number of outputs for a given number of inputs)
CLASSICAL_FUNCTIONS: Dict[
    str, Tuple[Callable[[Sequence[int]], Tuple[int, ...]], Callable[[int], int]]
] = {
    "prefix_parity": (prefix_parity, lambda n_inputs: n_inputs),
    "parity": (parity, lambda n_inputs: 1),
}


@dataclass(frozen=True)
class GateOp:
    """A single circuit operation.

    Field usage depends on the kind:
      - single-qubit gates: ``qubits=(q,)``, ``angle`` for RY/RZ,
        ``entries`` (row-major 2x2) for GENERIC1Q
      - CNOT/CRY/CRZ: ``qubits=(control, target)``
      - MEASURE: ``qubits=(q,)``, ``clbits=(target_bit,)``, ``consume``
      - CLASSICAL_COMPUTE: ``clbits`` are inputs, ``outputs`` the written bits,
        ``function`` a key of CLASSICAL_FUNCTIONS
      - COND: ``clbits=(condition_bit,)``, ``inner`` the gate applied to
        ``qubits[0]`` when the bit is 1
    """

    kind: GateKind
    qubits: Tuple[int, ...] = ()
    angle: Optional[float] = None
    entries: Optional[Tuple[complex, ...]] = None
    clbits: Tuple[int, ...] = ()
    outputs: Tuple[int, ...] = ()
    function: Optional[str] = None
    consume: bool = False
    inner: Optional[GateKind] = None

    @property
    def is_conditional(self) -> bool:
        return self.kind is GateKind.COND

    @property
    def reads(self) -> Tuple[int, ...]:
        """Classical bits read by the operation."""
        if self.kind in (GateKind.CLASSICAL_COMPUTE, GateKind.COND):
            return self.clbits
        return ()

    @property
    def writes(self) -> Tuple[int, ...]:
        """Classical bits written by the operation."""
        if self.kind is GateKind.MEASURE:
            return self.clbits
        if self.kind is GateKind.CLASSICAL_COMPUTE:
            return self.outputs
        return ()

    def matrix(self) -> np.ndarray:
        """Return the 2x2 matrix of a single-qubit op, or of a COND's inner gate."""
        kind = self.inner if self.kind is GateKind.COND else self.kind
        if kind is None or kind not in SINGLE_QUBIT_KINDS:
            raise ValueError(f"{self.kind.value} has no single-qubit matrix")
        return single_qubit_matrix(kind.value, self.angle, self.entries)

    def to_text(self) -> str:
        """Render the operation as one line of the circuit text format."""
        kind = self.kind
        if kind in SINGLE_QUBIT_KINDS:
            return " ".join([kind.value, str(self.qubits[0])] + _parameter_tokens(self))
        if kind in TWO_QUBIT_KINDS:
            tokens = [kind.value, str(self.qubits[0]), str(self.qubits[1])]
            if self.angle is not None:
                tokens.append(repr(float(self.angle)))
            return " ".join(tokens)
        if kind is GateKind.MEASURE:
            line = f"M {self.qubits[0]} -> c{self.clbits[0]}"
            return line + " consume" if self.consume else line
        if kind is GateKind.CLASSICAL_COMPUTE:
            inputs = " ".join(f"c{c}" for c in self.clbits)
            outputs = " ".join(f"c{c}" for c in self.outputs)
            return f"COMPUTE {self.function} {inputs} -> {outputs}"
        assert self.inner is not None
        inner_tokens = [self.inner.value, str(self.qubits[0])] + _parameter_tokens(self)
        return " ".join([f"COND c{self.clbits[0]}"] + inner_tokens)


def _parameter_tokens(op: GateOp) -> List[str]:
    if op.angle is not None:
        return [repr(float(op.angle))]
    if op.entries is not None:
        tokens = []
        for value in op.entries:
            tokens.extend([repr(float(value.real)), repr(float(value.imag))])
        return tokens
    return []


class Circuit:
    """Ordered gate/measure/feedforward program over qubits and classical bits.

    Builder methods append operations and return the circuit (or the allocated
    classical bits for ``measure`` and ``compute``). Named qubit registers
    (``data``, ``aux``, ...) and named classical flags tell simulators which
    qubits and bits form the output.
    """

    def __init__(self, num_qubits: int, num_clbits: int = 0, name: str = "circuit") -> None:
        """Initialize an empty circuit.

        Args:
            num_qubits: Number of declared qubits
            num_clbits: Number of declared classical bits
            name: Human-readable circuit name

        Raises:
            ValueError: If a count is negative
        """
        if num_qubits < 0 or num_clbits < 0:
            raise ValueError("Qubit and clbit counts must be non-negative")
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.name = name
        self.ops: List[GateOp] = []
        self.registers: Dict[str, List[int]] = {}
        self.flags: Dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self.ops)

    def __repr__(self) -> str:
        return (
            f"Circuit(name={self.name!r}, qubits={self.num_qubits}, "
            f"clbits={self.num_clbits}, ops={len(self.ops)})"
        )

    # allocation

    def add_qubits(self, count: int, register: Optional[str] = None) -> List[int]:
        """Declare ``count`` fresh qubits, optionally appending them to a register."""
        qubits = list(range(self.num_qubits, self.num_qubits + count))
        self.num_qubits += count
        if register is not None:
            self.registers.setdefault(register, []).extend(qubits)
        return qubits

    def add_clbits(self, count: int) -> List[int]:
        clbits = list(range(self.num_clbits, self.num_clbits + count))
        self.num_clbits += count
        return clbits

    @property
    def data_qubits(self) -> List[int]:
        """Qubits of the ``data`` register, or all qubits if none is declared."""
        return list(self.registers.get("data", range(self.num_qubits)))

    # builders

    def append(self, op: GateOp) -> "Circuit":
        self.ops.append(op)
        return self

    def h(self, qubit: int) -> "Circuit":
        return self.append(GateOp(GateKind.H, (qubit,)))

    def x(self, qubit: int) -> "Circuit":
        return self.append(GateOp(GateKind.X, (qubit,)))

    def z(self, qubit: int) -> "Circuit":
        return self.append(GateOp(GateKind.Z, (qubit,)))

    def ry(self, qubit: int, theta: float) -> "Circuit":
        return self.append(GateOp(GateKind.RY, (qubit,), angle=float(theta)))

    def rz(self, qubit: int, phi: float) -> "Circuit":
        return self.append(GateOp(GateKind.RZ, (qubit,), angle=float(phi)))

    def unitary(self, qubit: int, matrix: np.ndarray) -> "Circuit":
        return self.append(
            GateOp(GateKind.GENERIC1Q, (qubit,), entries=matrix_to_entries(matrix))
        )

    def cnot(self, control: int, target: int) -> "Circuit":
        return self.append(GateOp(GateKind.CNOT, (control, target)))

    def cry(self, control: int, target: int, theta: float) -> "Circuit":
        return self.append(GateOp(GateKind.CRY, (control, target), angle=float(theta)))

    def crz(self, control: int, target: int, phi: float) -> "Circuit":
        return self.append(GateOp(GateKind.CRZ, (control, target), angle=float(phi)))

    def measure(self, qubit: int, clbit: Optional[int] = None, consume: bool = True) -> int:
        """Measure a qubit in the Z basis and return the written clbit."""
        if clbit is None:
            clbit = self.add_clbits(1)[0]
        self.append(GateOp(GateKind.MEASURE, (qubit,), clbits=(clbit,), consume=consume))
        return clbit

    def compute(self, function: str, inputs: Sequence[int]) -> List[int]:
        """Append a classical computation and return its freshly allocated outputs."""
        if function not in CLASSICAL_FUNCTIONS:
            raise ValueError(f"Unknown classical function: {function}")
        n_outputs = CLASSICAL_FUNCTIONS[function][1](len(inputs))
        outputs = self.add_clbits(n_outputs)
        self.append(
            GateOp(
                GateKind.CLASSICAL_COMPUTE,
                clbits=tuple(inputs),
                outputs=tuple(outputs),
                function=function,
            )
        )
        return outputs

    def cond(
        self,
        clbit: int,
        inner: GateKind,
        qubit: int,
        angle: Optional[float] = None,
        matrix: Optional[np.ndarray] = None,
    ) -> "Circuit":
        """Apply ``inner`` to ``qubit`` when classical bit ``clbit`` is 1."""
        entries = matrix_to_entries(matrix) if matrix is not None else None
        return self.append(
            GateOp(
                GateKind.COND,
                (qubit,),
                angle=None if angle is None else float(angle),
                entries=entries,
                clbits=(clbit,),
                inner=inner,
            )
        )

    # whole-circuit helpers

    def copy(self) -> "Circuit":
        duplicate = Circuit(self.num_qubits, self.num_clbits, self.name)
        duplicate.ops = list(self.ops)
        duplicate.registers = {key: list(value) for key, value in self.registers.items()}
        duplicate.flags = dict(self.flags)
        return duplicate

    def compose(self, other: "Circuit", qubit_map: Optional[Sequence[int]] = None) -> "Circuit":
        """Return a new circuit running ``self`` then ``other``.

        Args:
            other: Circuit appended after this one
            qubit_map: Qubit of ``self`` for each qubit of ``other``; identity if
                omitted

        Returns:
            New circuit; the registers and flags of ``other`` are carried over
            (mapped), classical bits of ``other`` are appended after ours

        Raises:
            ValueError: If the map does not cover ``other``'s qubits
        """
        if qubit_map is None:
            qubit_map = list(range(other.num_qubits))
        if len(qubit_map) != other.num_qubits:
            raise ValueError("Qubit map must cover every qubit of the appended circuit")
        num_qubits = max([self.num_qubits] + [q + 1 for q in qubit_map])
        result = self.copy()
        result.num_qubits = num_qubits
        offset = result.num_clbits
        result.num_clbits += other.num_clbits
        for op in other.ops:
            result.ops.append(
                GateOp(
                    op.kind,
                    tuple(qubit_map[q] for q in op.qubits),
                    angle=op.angle,
                    entries=op.entries,
                    clbits=tuple(c + offset for c in op.clbits),
                    outputs=tuple(c + offset for c in op.outputs),
                    function=op.function,
                    consume=op.consume,
                    inner=op.inner,
                )
            )
        for key, qubits in other.registers.items():
            result.registers[key] = [qubit_map[q] for q in qubits]
        for key, clbit in other.flags.items():
            result.flags[key] = clbit + offset
        return result

    def gate_counts(self) -> Dict[str, int]:
        """Count operations by kind mnemonic (COND counted as ``COND``)."""
        counts: Dict[str, int] = {}
        for op in self.ops:
            counts[op.kind.value] = counts.get(op.kind.value, 0) + 1
        return counts

    # serialization

    def to_text(self) -> str:
        """Serialize to the line-oriented text format."""
        lines = [f"# {self.name}", f"QUBITS {self.num_qubits}", f"CLBITS {self.num_clbits}"]
        for key, qubits in self.registers.items():
            lines.append(" ".join(["REG", key] + [str(q) for q in qubits]))
        for key, clbit in self.flags.items():
            lines.append(f"FLAG {key} c{clbit}")
        lines.extend(op.to_text() for op in self.ops)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        """Parse the text format produced by ``to_text``.

        Raises:
            ValueError: On malformed lines
        """
        circuit = cls(0, 0)
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if number == 1:
                    circuit.name = line[1:].strip() or circuit.name
                continue
            try:
                _parse_line(circuit, line.split())
            except (IndexError, KeyError, ValueError) as exc:
                raise ValueError(f"line {number}: cannot parse {line!r} ({exc})") from exc
        return circuit


def _clbit(token: str) -> int:
    if not token.startswith("c"):
        raise ValueError(f"expected a clbit like c3, got {token}")
    return int(token[1:])


def _parse_parameters(kind: GateKind, tokens: List[str]) -> Dict[str, object]:
    if kind in (GateKind.RY, GateKind.RZ):
        return {"angle": float(tokens[0])}
    if kind is GateKind.GENERIC1Q:
        values = [float(t) for t in tokens[:8]]
        if len(values) != 8:
            raise ValueError("U needs 8 real numbers")
        return {"entries": tuple(complex(values[i], values[i + 1]) for i in range(0, 8, 2))}
    return {}


def _parse_line(circuit: Circuit, tokens: List[str]) -> None:
    head = tokens[0]
    if head == "QUBITS":
        circuit.num_qubits = int(tokens[1])
    elif head == "CLBITS":
        circuit.num_clbits = int(tokens[1])
    elif head == "REG":
        circuit.registers[tokens[1]] = [int(t) for t in tokens[2:]]
    elif head == "FLAG":
        circuit.flags[tokens[1]] = _clbit(tokens[2])
    elif head == "M":
        if tokens[2] != "->":
            raise ValueError("measure needs '->'")
        circuit.append(
            GateOp(
                GateKind.MEASURE,
                (int(tokens[1]),),
                clbits=(_clbit(tokens[3]),),
                consume=len(tokens) > 4 and tokens[4] == "consume",
            )
        )
    elif head == "COMPUTE":
        arrow = tokens.index("->")
        circuit.append(
            GateOp(
                GateKind.CLASSICAL_COMPUTE,
                clbits=tuple(_clbit(t) for t in tokens[2:arrow]),
                outputs=tuple(_clbit(t) for t in tokens[arrow + 1:]),
                function=tokens[1],
            )
        )
    elif head == "COND":
        inner = GateKind(tokens[2])
        circuit.append(
            GateOp(
                GateKind.COND,
                (int(tokens[3]),),
                clbits=(_clbit(tokens[1]),),
                inner=inner,
                **_parse_parameters(inner, tokens[4:]),  # type: ignore[arg-type]
            )
        )
    else:
        kind = GateKind(head)
        if kind in TWO_QUBIT_KINDS:
            angle = float(tokens[3]) if kind in CONTROLLED_ROTATION_KINDS else None
            circuit.append(GateOp(kind, (int(tokens[1]), int(tokens[2])), angle=angle))
        else:
            circuit.append(
                GateOp(kind, (int(tokens[1]),), **_parse_parameters(kind, tokens[2:]))  # type: ignore[arg-type]
            )


def _expected_arity(kind: GateKind) -> int:
    if kind in TWO_QUBIT_KINDS:
        return 2
    if kind is GateKind.CLASSICAL_COMPUTE:
        return 0
    return 1


def validate(circuit: Circuit) -> List[str]:
    """Check the structural invariants of a circuit.

    Args:
        circuit: Circuit to check

    Returns:
        List of violations, each naming the op index; empty when valid
    """
    violations: List[str] = []
    consumed: set = set()
    written: set = set()
    for index, op in enumerate(circuit.ops):
        if len(op.qubits) != _expected_arity(op.kind):
            violations.append(f"wrong number of qubits for {op.kind.value} at op {index}")
            continue
        out_of_range = [q for q in op.qubits if not 0 <= q < circuit.num_qubits]
        for qubit in out_of_range:
            violations.append(f"qubit index {qubit} out of range at op {index}")
        for clbit in op.clbits + op.outputs:
            if not 0 <= clbit < circuit.num_clbits:
                violations.append(f"clbit index {clbit} out of range at op {index}")
        if op.kind in TWO_QUBIT_KINDS and op.qubits[0] == op.qubits[1]:
            violations.append(f"control equals target at op {index}")
        for qubit in op.qubits:
            if qubit in consumed:
                violations.append(f"use after measurement of qubit {qubit} at op {index}")
        for clbit in op.reads:
            if clbit not in written:
                violations.append(f"clbit c{clbit} read before it is written at op {index}")
        violations.extend(_parameter_violations(op, index))
        if op.kind is GateKind.MEASURE and op.consume and not out_of_range:
            consumed.add(op.qubits[0])
        written.update(op.writes)
    return violations


def _parameter_violations(op: GateOp, index: int) -> List[str]:
    kind = op.inner if op.kind is GateKind.COND else op.kind
    problems = []
    if op.kind is GateKind.COND and (kind is None or kind not in SINGLE_QUBIT_KINDS):
        problems.append(f"conditional gate must be single-qubit at op {index}")
        return problems
    if kind in ROTATION_KINDS and op.angle is None:
        problems.append(f"missing angle at op {index}")
    if kind is GateKind.GENERIC1Q:
        if op.entries is None or len(op.entries) != 4:
            problems.append(f"generic gate needs 4 matrix entries at op {index}")
        elif not is_unitary(op.matrix()):
            problems.append(f"generic gate is not unitary at op {index}")
    if op.kind is GateKind.MEASURE and len(op.clbits) != 1:
        problems.append(f"measurement must write one clbit at op {index}")
    if op.kind is GateKind.CLASSICAL_COMPUTE:
        if op.function not in CLASSICAL_FUNCTIONS:
            problems.append(f"unknown classical function {op.function} at op {index}")
        elif CLASSICAL_FUNCTIONS[op.function][1](len(op.clbits)) != len(op.outputs):
            problems.append(f"wrong number of outputs for {op.function} at op {index}")
    if op.kind is GateKind.COND and len(op.clbits) != 1:
        problems.append(f"condition must name one clbit at op {index}")
    return problems


def check_valid(circuit: Circuit) -> None:
    """Raise CircuitValidationError if ``validate`` reports any violation."""
    violations = validate(circuit)
    if violations:
        raise CircuitValidationError(violations)


def decompose_controlled_1q(circuit: Circuit) -> Circuit:
    """Replace controlled rotations by 3 single-qubit gates and 2 CNOTs.

    Uses U = A·X·B·X·C with A·B·C = I on the target: for CRY(θ)
    A = RY(θ/2), B = RY(−θ/2), C = I; for CRZ(φ) A = RZ(φ),
    B = C = RZ(−φ/2). The gates are emitted in time order C, CNOT, B, CNOT, A
    as GENERIC1Q ops.

    Args:
        circuit: Circuit possibly holding CRY/CRZ pseudo-ops

    Returns:
        New circuit without controlled rotations
    """
    result = Circuit(circuit.num_qubits, circuit.num_clbits, circuit.name)
    result.registers = {key: list(value) for key, value in circuit.registers.items()}
    result.flags = dict(circuit.flags)
    replaced = 0
    for op in circuit.ops:
        if op.kind not in CONTROLLED_ROTATION_KINDS:
            result.append(op)
            continue
        assert op.angle is not None
        control, target = op.qubits
        if op.kind is GateKind.CRY:
            a, b, c = ry_matrix(op.angle / 2), ry_matrix(-op.angle / 2), IDENTITY
        else:
            a, b, c = rz_matrix(op.angle), rz_matrix(-op.angle / 2), rz_matrix(-op.angle / 2)
        result.unitary(target, c)
        result.cnot(control, target)
        result.unitary(target, b)
        result.cnot(control, target)
        result.unitary(target, a)
        replaced += 1
    logger.debug("Decomposed %d controlled rotations in %s", replaced, circuit.name)
    return result
