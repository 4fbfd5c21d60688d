"""Tests for ASAP layering."""

import pytest

from src.adaptiveprep.models.circuit import Circuit, GateKind, decompose_controlled_1q
from src.adaptiveprep.models.schedule import LayerClass, dependencies, op_class, schedule
from src.adaptiveprep.protocols.ghz import ADAPTIVE, ALL_TO_ALL, LINEAR, build_ghz
from src.adaptiveprep.protocols.w_state import build_w_nonadaptive


class TestSchedule:
    """Test cases for the scheduler."""

    def test_ghz_all_to_all_doubles_each_layer(self) -> None:
        """Test that GHZ-all on 8 qubits is one H layer and CNOT layers of 1, 2 and 4."""
        layered = schedule(build_ghz(8, ALL_TO_ALL))
        assert layered.depth == 4
        assert [layer.layer_class for layer in layered] == [LayerClass.SINGLE] + [LayerClass.DOUBLE] * 3
        assert [len(layer.ops) for layer in layered] == [1, 1, 2, 4]

    def test_ghz_linear_grows_two_per_layer(self) -> None:
        layered = schedule(build_ghz(6, LINEAR))
        assert [len(layer.ops) for layer in layered] == [1, 1, 2, 2]

    def test_adaptive_ghz_layer_classes(self) -> None:
        """Test the H, CNOT, CNOT, M, compute, correction structure."""
        layered = schedule(build_ghz(4, ADAPTIVE))
        assert [layer.layer_class for layer in layered] == [
            LayerClass.SINGLE,
            LayerClass.DOUBLE,
            LayerClass.DOUBLE,
            LayerClass.MEASURE,
            LayerClass.CLASSICAL,
            LayerClass.SINGLE,
        ]
        assert layered.layers[-1].conditional_count == 3

    def test_layers_are_homogeneous(self) -> None:
        for layer in schedule(build_ghz(9, ADAPTIVE)):
            assert {op_class(op) for op in layer.ops} == {layer.layer_class}

    def test_live_set_shrinks_after_consuming_measurement(self) -> None:
        """Test that measured auxiliary qubits leave the live set."""
        layers = list(schedule(build_ghz(4, ADAPTIVE)))
        assert len(layers[0].live) == 7
        assert len(layers[4].live) == 4
        assert layers[3].active == frozenset({4, 5, 6})

    def test_active_and_idle_partition_live_qubits(self) -> None:
        for layer in schedule(build_ghz(6, LINEAR)):
            assert not layer.active & layer.idle
            assert len(layer.live) == 6

    def test_parallelism_cap(self) -> None:
        """Test that max_parallel_2q splits wide CNOT layers."""
        layered = schedule(build_ghz(8, ALL_TO_ALL), max_parallel_2q=2)
        assert max(len(layer.ops) for layer in layered if layer.layer_class is LayerClass.DOUBLE) == 2
        assert layered.depth == 5

    def test_invalid_parallelism_cap(self) -> None:
        with pytest.raises(ValueError, match="max_parallel_2q must be positive"):
            schedule(build_ghz(4, LINEAR), max_parallel_2q=0)

    def test_controlled_rotations_must_be_decomposed(self) -> None:
        """Test that CRY pseudo-ops are rejected by the scheduler."""
        circuit = build_w_nonadaptive(4)
        with pytest.raises(ValueError, match="decompose"):
            schedule(circuit)
        assert schedule(decompose_controlled_1q(circuit)).depth == 13

    def test_w_cascade_depth(self) -> None:
        """Test that the decomposed cascade has depth 5n-7."""
        for n in range(2, 9):
            assert schedule(decompose_controlled_1q(build_w_nonadaptive(n))).depth == 5 * n - 7

    def test_ops_replay_every_operation(self) -> None:
        circuit = build_ghz(5, ADAPTIVE)
        assert sorted(map(repr, schedule(circuit).ops())) == sorted(map(repr, circuit.ops))

    def test_class_counts(self) -> None:
        counts = schedule(build_ghz(4, ADAPTIVE)).class_counts()
        assert counts == {
            LayerClass.SINGLE: 2,
            LayerClass.DOUBLE: 2,
            LayerClass.MEASURE: 1,
            LayerClass.CLASSICAL: 1,
        }

    def test_clbit_dependencies(self) -> None:
        """Test that a conditional gate waits for the measurement it reads."""
        circuit = Circuit(2)
        bit = circuit.measure(0)
        circuit.cond(bit, GateKind.X, 1)
        assert dependencies(circuit) == [set(), {0}]
        assert schedule(circuit).depth == 2

    def test_empty_circuit(self) -> None:
        assert schedule(Circuit(3)).depth == 0
