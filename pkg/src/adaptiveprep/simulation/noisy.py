"""Monte Carlo sampling of the worst-case error model.

Error sites are read off the schedule, one per operation and one per idle
qubit in every layer, so they correspond one-for-one to the counting oracle.
A failing gate or idle slot applies a Haar-random unitary to its qubit(s)
instead of the intended operation; a failing measurement records the flipped
bit, which the feedforward then sees.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..models.circuit import SINGLE_QUBIT_KINDS, Circuit, GateKind, GateOp, decompose_controlled_1q
from ..models.error_model import SuccessTerms, count_exponents, evaluate
from ..models.exceptions import QubitCapExceededError
from ..models.schedule import LayerClass, Schedule, schedule
from .histogram import ShotHistogram, bitstring
from .ideal import CAP_HINT, DEFAULT_MAX_QUBITS, apply_unitary, check_qubit_cap, run_classical
from .statevector import StateVector

logger = logging.getLogger(__name__)


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix.

    The phases of R's diagonal are moved into Q so the result is uniform.

    Raises:
        ValueError: If dim is not positive
    """
    if dim <= 0:
        raise ValueError("Dimension must be positive")
    gaussian = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(gaussian)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


@dataclass(frozen=True)
class ErrorSite:
    """A place where the worst-case model can fail."""

    layer: int
    kind: str
    qubits: Tuple[int, ...]
    probability: float


@dataclass
class ShotResult:
    events: List[ErrorSite]
    bits: Optional[str] = None
    flags: Dict[str, int] = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.events


@dataclass
class NoisyRunReport:
    """Outcome of a noisy Monte Carlo run."""

    shots: int
    clean_shots: int
    predicted_success: float
    histogram: Optional[ShotHistogram] = None
    clean_histogram: Optional[ShotHistogram] = None
    event_log: Optional[List[List[ErrorSite]]] = field(default=None, repr=False)

    @property
    def clean_fraction(self) -> float:
        return self.clean_shots / self.shots

    @property
    def sigma(self) -> float:
        """Binomial standard deviation of the clean fraction at the predicted rate."""
        p = self.predicted_success
        return math.sqrt(p * (1 - p) / self.shots)

    def deviation_sigmas(self) -> float:
        difference = abs(self.clean_fraction - self.predicted_success)
        if self.sigma == 0:
            return 0.0 if difference == 0 else math.inf
        return difference / self.sigma

    def within_sigma(self, k: float = 3.0) -> bool:
        return self.deviation_sigmas() <= k


class WorstCaseMonteCarlo:
    """Monte Carlo engine for the worst-case error model.

    The circuit is decomposed and scheduled once; every shot draws one uniform
    number per error site from its own seed-derived stream.
    """

    def __init__(
        self,
        circuit: Circuit,
        terms: SuccessTerms,
        max_qubits: int = DEFAULT_MAX_QUBITS,
        track_state: bool = True,
        log_events: bool = False,
        max_parallel_2q: Optional[int] = None,
        postselect: Optional[Tuple[str, int]] = None,
    ) -> None:
        """Initialize the engine.

        Args:
            circuit: Circuit to sample; controlled rotations are decomposed
            terms: Success terms of the error model
            max_qubits: Cap on simultaneously live qubits when tracking the state
            track_state: Evolve the statevector; without it only error events
                are sampled (no histogram, no qubit cap)
            log_events: Keep every shot's error events in the report
            max_parallel_2q: Optional cap on CNOTs per layer
            postselect: Optional (flag name, required value); tracked shots with
                another recorded value are counted as rejected in the histograms

        Raises:
            QubitCapExceededError: If state tracking needs too many qubits
            ValueError: If the postselection flag is unknown
        """
        if postselect is not None and postselect[0] not in circuit.flags:
            raise ValueError(f"Circuit has no flag named {postselect[0]!r}")
        self.circuit = decompose_controlled_1q(circuit)
        self.terms = terms
        self.max_qubits = max_qubits
        self.track_state = track_state
        self.log_events = log_events
        self.postselect = postselect
        self.schedule: Schedule = schedule(self.circuit, max_parallel_2q)
        if track_state:
            check_qubit_cap(self.circuit, max_qubits)
        self.sites, self._offsets = self._enumerate_sites()
        self._probabilities = np.array([site.probability for site in self.sites])
        logger.info(
            "%s: %d layers, %d error sites", self.circuit.name, len(self.schedule), len(self.sites)
        )

    def _layer_terms(self, layer_class: LayerClass) -> Tuple[float, float]:
        t = self.terms
        return {
            LayerClass.SINGLE: (t.p_s, t.p_is),
            LayerClass.DOUBLE: (t.p_d, t.p_id),
            LayerClass.MEASURE: (t.p_m, t.p_im),
            LayerClass.CLASSICAL: (1.0, t.p_ic),
        }[layer_class]

    def _enumerate_sites(self) -> Tuple[List[ErrorSite], List[int]]:
        sites: List[ErrorSite] = []
        offsets: List[int] = []
        for index, layer in enumerate(self.schedule):
            offsets.append(len(sites))
            p_active, p_idle = self._layer_terms(layer.layer_class)
            if layer.layer_class is LayerClass.CLASSICAL:
                sites.extend(ErrorSite(index, "idle", (q,), p_idle) for q in sorted(layer.live))
                continue
            kind = "measure" if layer.layer_class is LayerClass.MEASURE else "gate"
            sites.extend(ErrorSite(index, kind, op.qubits, p_active) for op in layer.ops)
            sites.extend(ErrorSite(index, "idle", (q,), p_idle) for q in sorted(layer.idle))
        return sites, offsets

    @property
    def predicted_success(self) -> float:
        """Probability of a shot without error events."""
        return evaluate(count_exponents(self.schedule, worst_case_corrections=False), self.terms)

    def run_single_shot(self, seed: np.random.SeedSequence) -> ShotResult:
        """Sample the error sites of one shot and, if tracked, evolve its state."""
        event_seed, state_seed = seed.spawn(2)
        failed = np.random.default_rng(event_seed).random(len(self.sites)) >= self._probabilities
        events = [self.sites[i] for i in np.flatnonzero(failed)]
        if not self.track_state:
            return ShotResult(events)

        rng = np.random.default_rng(state_seed)
        state = StateVector()
        values: Dict[int, int] = {}
        for index, layer in enumerate(self.schedule):
            offset = self._offsets[index]
            if layer.layer_class is LayerClass.CLASSICAL:
                for op in layer.ops:
                    run_classical(op, values)
                idle = sorted(layer.live)
            else:
                for j, op in enumerate(layer.ops):
                    self._apply_op(state, op, values, bool(failed[offset + j]), rng)
                offset += len(layer.ops)
                idle = sorted(layer.idle)
            for j, qubit in enumerate(idle):
                if failed[offset + j]:
                    state.apply_1q(haar_random_unitary(2, rng), qubit)
            if state.num_qubits > self.max_qubits:
                raise QubitCapExceededError(state.num_qubits, self.max_qubits, CAP_HINT)

        data = self.circuit.data_qubits
        probabilities = state.marginal_probabilities(data)
        outcome = rng.choice(len(probabilities), p=probabilities / probabilities.sum())
        flags = {name: values[clbit] for name, clbit in self.circuit.flags.items() if clbit in values}
        return ShotResult(events, bitstring(int(outcome), len(data)), flags)

    def _apply_op(
        self,
        state: StateVector,
        op: GateOp,
        values: Dict[int, int],
        failed: bool,
        rng: np.random.Generator,
    ) -> None:
        if op.kind is GateKind.MEASURE:
            qubit = op.qubits[0]
            outcome = int(rng.random() < state.probability_one(qubit))
            state.project(qubit, outcome, remove=op.consume)
            values[op.clbits[0]] = outcome ^ int(failed)
        elif failed and op.kind is GateKind.CNOT:
            state.apply_2q(haar_random_unitary(4, rng), *op.qubits)
        elif failed:
            state.apply_1q(haar_random_unitary(2, rng), op.qubits[0])
        elif op.kind is GateKind.COND:
            if values[op.clbits[0]]:
                state.apply_1q(op.matrix(), op.qubits[0])
        elif op.kind in SINGLE_QUBIT_KINDS or op.kind is GateKind.CNOT:
            apply_unitary(state, op)
        else:
            raise ValueError(f"Cannot simulate {op.kind.value} in a noisy layer")

    def run_multiple_shots(self, shots: int, seed: Optional[int] = None) -> List[ShotResult]:
        """Run independent shots with seed-derived streams.

        Raises:
            ValueError: If shots is not positive
        """
        if shots <= 0:
            raise ValueError("Number of shots must be positive")
        return [self.run_single_shot(child) for child in np.random.SeedSequence(seed).spawn(shots)]

    def calculate_statistics(self, results: List[ShotResult]) -> Dict[str, Any]:
        """Aggregate shot results.

        Returns:
            Dictionary with clean shot count, mean number of events and, when the
            state was tracked, the histograms of all shots and of clean shots
        """
        if not results:
            raise ValueError("No shot results provided")
        statistics: Dict[str, Any] = {
            "clean_shots": sum(1 for r in results if r.clean),
            "mean_events": float(np.mean([len(r.events) for r in results])),
            "histogram": None,
            "clean_histogram": None,
        }
        if self.track_state:
            histogram, clean = ShotHistogram(), ShotHistogram()
            for result in results:
                assert result.bits is not None
                if self.postselect is not None:
                    name, value = self.postselect
                    if result.flags.get(name) != value:
                        histogram.rejected += 1
                        clean.rejected += int(result.clean)
                        continue
                histogram.add(result.bits)
                if result.clean:
                    clean.add(result.bits)
            statistics["histogram"] = histogram
            statistics["clean_histogram"] = clean
        return statistics

    def run_comprehensive_simulation(self, shots: int = 4096, seed: Optional[int] = None) -> NoisyRunReport:
        """Run shots and compare the clean fraction with the analytic prediction."""
        results = self.run_multiple_shots(shots, seed)
        statistics = self.calculate_statistics(results)
        report = NoisyRunReport(
            shots=shots,
            clean_shots=statistics["clean_shots"],
            predicted_success=self.predicted_success,
            histogram=statistics["histogram"],
            clean_histogram=statistics["clean_histogram"],
            event_log=[r.events for r in results] if self.log_events else None,
        )
        logger.info(
            "%s: clean fraction %.4f vs predicted %.4f (%.2f sigma)",
            self.circuit.name,
            report.clean_fraction,
            report.predicted_success,
            report.deviation_sigmas(),
        )
        return report
