"""W state preparation: deterministic cascade and parity postselection."""

import logging
import math

from ..models.circuit import Circuit
from .subroutines import emit_parity

logger = logging.getLogger(__name__)


def cascade_angle(m: int) -> float:
    """RY angle leaving amplitude sqrt(1/m) on |0>: 2 arccos sqrt(1/m)."""
    return 2 * math.acos(math.sqrt(1 / m))


def build_w_nonadaptive(n: int) -> Circuit:
    """Controlled-RY cascade followed by a descending CNOT chain.

    The cascade writes a unary (thermometer) code 1^j 0^(n-j) with equal
    amplitudes for j = 0..n-1; the CNOT chain and a final X on qubit 0 turn it
    into the one-hot code of the W state. Controlled rotations are kept as
    CRY ops; decompose them before scheduling.

    Raises:
        ValueError: If n < 2
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    circuit = Circuit(0, name=f"w-nonadaptive-{n}")
    data = circuit.add_qubits(n, register="data")
    circuit.ry(data[0], cascade_angle(n))
    for i in range(1, n - 1):
        circuit.cry(data[i - 1], data[i], cascade_angle(n - i))
    for i in range(n - 2, -1, -1):
        circuit.cnot(data[i], data[i + 1])
    circuit.x(data[0])
    return circuit


def approx_angle(n: int) -> float:
    return math.acos(math.sqrt((n - 1) / n))


def build_w_approx_postselect(n: int) -> Circuit:
    """n parallel RY rotations followed by a parity measurement.

    Keeping only odd-parity runs leaves a state close to W_n. The parity bit is
    exposed as the ``parity`` flag; postselection is left to the simulator.

    Raises:
        ValueError: If n < 1
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    circuit = Circuit(0, name=f"w-approx-{n}")
    data = circuit.add_qubits(n, register="data")
    (ancilla,) = circuit.add_qubits(1, register="parity")
    theta = approx_angle(n)
    for qubit in data:
        circuit.ry(qubit, theta)
    emit_parity(circuit, ancilla, data)
    circuit.flags["parity"] = circuit.measure(ancilla)
    logger.debug("Built approximate W circuit for n=%d (theta=%.6f)", n, theta)
    return circuit
