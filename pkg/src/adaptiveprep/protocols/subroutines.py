"""Constant-depth adaptive subroutines: fanout, parity, mu states, OR-reduction.

The ``emit_*`` functions append a subroutine to an existing circuit and
allocate their own auxiliary qubits; the ``build_*`` functions wrap them in a
standalone circuit whose ``data`` register holds the inputs.
"""

import logging
import math
from typing import List, Sequence

from ..models.circuit import Circuit, GateKind

logger = logging.getLogger(__name__)


def emit_fanout(circuit: Circuit, control: int, targets: Sequence[int]) -> None:
    """Append a constant-depth fanout: every target is XORed with the control.

    A GHZ state over n mediator qubits (n = 1 + number of targets) is prepared
    adaptively on 2n-1 fresh auxiliary qubits, the control is CNOTed into the
    first mediator and measured off, and the remaining mediators, corrected to
    copies of the control, drive the targets before being measured in the X
    basis. A final conditional Z on the control removes the phase kickback.

    Raises:
        ValueError: If there are no targets
    """
    if not targets:
        raise ValueError("Fanout needs at least one target")
    arity = len(targets) + 1
    aux = circuit.add_qubits(2 * arity - 1, register="aux")
    mediators = aux[0::2]
    links = aux[1::2]

    for qubit in mediators:
        circuit.h(qubit)
    for i, link in enumerate(links):
        circuit.cnot(mediators[i], link)
    for i, link in enumerate(links):
        circuit.cnot(mediators[i + 1], link)
    circuit.cnot(control, mediators[0])

    first = circuit.measure(mediators[0])
    boundaries = [circuit.measure(link) for link in links]
    flips = circuit.compute("prefix_parity", [first] + boundaries)
    for j in range(1, arity):
        circuit.cond(flips[j], GateKind.X, mediators[j])

    for j, target in enumerate(targets, start=1):
        circuit.cnot(mediators[j], target)
    for j in range(1, arity):
        circuit.h(mediators[j])
    phases = [circuit.measure(mediators[j]) for j in range(1, arity)]
    (kick,) = circuit.compute("parity", phases)
    circuit.cond(kick, GateKind.Z, control)


def emit_parity(circuit: Circuit, target: int, inputs: Sequence[int]) -> None:
    """Append a parity gate: ``target`` is XORed with the parity of ``inputs``.

    Implemented as a fanout from ``target`` to ``inputs`` conjugated by
    Hadamards on every data qubit.
    """
    data = [target] + list(inputs)
    for qubit in data:
        circuit.h(qubit)
    emit_fanout(circuit, target, inputs)
    for qubit in data:
        circuit.h(qubit)


def build_fanout(n: int) -> Circuit:
    """Fanout of arity n: qubit 0 is the control, qubits 1..n-1 the targets.

    Raises:
        ValueError: If n < 2
    """
    if n < 2:
        raise ValueError("Fanout requires n >= 2")
    circuit = Circuit(0, name=f"fanout-{n}")
    data = circuit.add_qubits(n, register="data")
    emit_fanout(circuit, data[0], data[1:])
    return circuit


def build_parity(n: int) -> Circuit:
    """Parity of arity n: qubit 0 receives the XOR of qubits 1..n-1.

    Raises:
        ValueError: If n < 2
    """
    if n < 2:
        raise ValueError("Parity requires n >= 2")
    circuit = Circuit(0, name=f"parity-{n}")
    data = circuit.add_qubits(n, register="data")
    emit_parity(circuit, data[0], data[1:])
    return circuit


def mu_levels(n: int) -> int:
    """Number t = ceil(log2(n+1)) of mu registers needed for an n-bit input."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return n.bit_length()


def mu_phase(k: int) -> float:
    return 2 * math.pi / 2**k


def emit_mu(circuit: Circuit, k: int, inputs: Sequence[int]) -> int:
    """Append a mu-state preparation reading ``inputs`` and return its output qubit.

    The output ends in ((1+e^{i phi c})|0> + (1-e^{i phi c})|1>)/2 up to a global
    phase, with phi = 2 pi / 2^k and c the Hamming weight of the inputs. The
    other register qubits return to |0>.
    """
    register = circuit.add_qubits(len(inputs), register="mu_work")
    head = register[0]
    circuit.h(head)
    if len(register) > 1:
        emit_fanout(circuit, head, register[1:])
    for source, qubit in zip(inputs, register):
        circuit.crz(source, qubit, mu_phase(k))
    if len(register) > 1:
        emit_fanout(circuit, head, register[1:])
    circuit.h(head)
    circuit.registers.setdefault("mu", []).append(head)
    return head


def build_mu_state(k: int, n: int) -> Circuit:
    """Standalone mu-state preparation on an n-qubit ``data`` register.

    Raises:
        ValueError: If n < 1 or k is outside 1..ceil(log2(n+1))
    """
    t = mu_levels(n)
    if not 1 <= k <= t:
        raise ValueError(f"k must lie in 1..{t} for n={n}")
    circuit = Circuit(0, name=f"mu-{k}-{n}")
    data = circuit.add_qubits(n, register="data")
    emit_mu(circuit, k, data)
    return circuit


def build_or_reduction(n: int) -> Circuit:
    """Compress an n-bit input into t = ceil(log2(n+1)) mu qubits in parallel.

    Each input bit is copied t-1 times by fanout so that the t mu preparations
    read disjoint qubits; the copies are uncomputed at the end. The outputs are
    listed in the ``mu`` register in order k = 1..t.

    Raises:
        ValueError: If n < 1
    """
    t = mu_levels(n)
    circuit = Circuit(0, name=f"or-reduction-{n}")
    data = circuit.add_qubits(n, register="data")
    copies: List[List[int]] = [[qubit] for qubit in data]
    if t > 1:
        for j, qubit in enumerate(data):
            extra = circuit.add_qubits(t - 1, register="copies")
            emit_fanout(circuit, qubit, extra)
            copies[j].extend(extra)
    for k in range(1, t + 1):
        emit_mu(circuit, k, [copies[j][k - 1] for j in range(n)])
    if t > 1:
        for j, qubit in enumerate(data):
            emit_fanout(circuit, qubit, copies[j][1:])
    logger.debug("Built OR-reduction for n=%d with t=%d mu registers", n, t)
    return circuit
