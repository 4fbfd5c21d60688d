"""Exact acceptance and fidelity of the parity-postselected W preparation."""

import logging
from dataclasses import dataclass
from typing import Optional

from ..models.circuit import Circuit
from ..protocols.w_state import build_w_approx_postselect
from .ideal import StatevectorSimulator
from .statevector import fidelity, w_vector

logger = logging.getLogger(__name__)

PARITY_FLAG = "parity"


@dataclass(frozen=True)
class PostselectionResult:
    acceptance: float
    fidelity: float


def postselect_parity(
    n: int,
    simulator: Optional[StatevectorSimulator] = None,
    circuit: Optional[Circuit] = None,
    accept: int = 1,
) -> PostselectionResult:
    """Probability of the accepted parity outcome and the W fidelity given acceptance.

    Only the parity flag is enumerated; the other measurements inside the
    parity gadget are sampled, since their outcomes are corrected by
    feedforward and leave the data state unchanged.

    Args:
        n: Number of data qubits
        simulator: Simulator to use, default limits if omitted
        circuit: Prebuilt circuit, built from n if omitted
        accept: Parity value that is kept

    Raises:
        ValueError: If the accepted outcome never occurs
    """
    circuit = circuit or build_w_approx_postselect(n)
    simulator = simulator or StatevectorSimulator()
    clbit = circuit.flags[PARITY_FLAG]
    branches = simulator.run_exact(circuit, seed=0, enumerate_clbits=[clbit])
    accepted = [b for b in branches if b.outcomes[clbit] == accept]
    if not accepted:
        raise ValueError(f"Parity outcome {accept} has zero probability for n={n}")
    acceptance = sum(b.probability for b in accepted)
    target = w_vector(n)
    weighted = sum(b.probability * fidelity(b.data_vector(circuit), target) for b in accepted)
    result = PostselectionResult(acceptance, weighted / acceptance)
    logger.debug("w-approx n=%d: acceptance %.6f fidelity %.6f", n, result.acceptance, result.fidelity)
    return result
