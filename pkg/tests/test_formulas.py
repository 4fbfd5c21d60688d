"""Tests for the closed-form exponents and the discrepancy reports."""

import math
from fractions import Fraction

import pytest

from src.adaptiveprep.analytics.formulas import (
    IFANOUT_EXPONENTS,
    SubroutineKind,
    WVariant,
    ceil_log2,
    exact_log2,
    ghz_exponents,
    ghz_idle_exponents,
    hybrid_circuit_exponents,
    subroutine_exponents,
    w_approx_acceptance,
    w_approx_fidelity,
    w_exponents,
)
from src.adaptiveprep.analytics.reports import (
    ghz_oracle_report,
    hybrid_published_report,
    or_gate_pow2_report,
    or_reduction_composition_report,
    published_55_reports,
    published_ghz_exponents,
    subroutine_oracle_report,
    w_composition_report,
    w_nonadaptive_oracle_report,
)
from src.adaptiveprep.models.error_model import ExponentVector
from src.adaptiveprep.protocols.ghz import ADAPTIVE, ALL_TO_ALL, LINEAR, hybrid_all, hybrid_linear


def hybrid_cases(sizes):
    """Every (n, hybrid variant) pair with k dividing n."""
    for n in sizes:
        for k in range(2, n + 1):
            if n % k == 0:
                yield n, hybrid_all(k)
                yield n, hybrid_linear(k)


class TestHelpers:
    """Test cases for integer logarithms."""

    def test_ceil_log2(self) -> None:
        assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]

    def test_exact_log2(self) -> None:
        assert exact_log2(16) == 4
        with pytest.raises(ValueError, match="power of two"):
            exact_log2(12)


class TestGhzFormulas:
    """Test cases for GHZ closed forms."""

    def test_linear_55(self) -> None:
        """Test the linear exponents at the 55-qubit comparison size."""
        assert ghz_exponents(55, LINEAR) == ExponentVector(1, 54, 54, 1432)

    def test_adaptive_55(self) -> None:
        assert ghz_exponents(55, ADAPTIVE) == ExponentVector(82, 82, 108, 2, 54, 55, 55)

    def test_all_to_all_8(self) -> None:
        assert ghz_exponents(8, ALL_TO_ALL) == ExponentVector(1, 7, 7, 10)

    def test_minimum_size(self) -> None:
        with pytest.raises(ValueError, match="requires n >= 2"):
            ghz_exponents(1, LINEAR)

    def test_hybrid_requires_divisor(self) -> None:
        with pytest.raises(ValueError, match="must divide"):
            ghz_exponents(10, hybrid_linear(4))

    def test_idle_exponents(self) -> None:
        """Test the survival exponents of one extra idling qubit."""
        assert ghz_idle_exponents(8, LINEAR) == ExponentVector(e_is=1, e_id=4)
        assert ghz_idle_exponents(8, ALL_TO_ALL) == ExponentVector(e_is=1, e_id=3)
        assert ghz_idle_exponents(8, ADAPTIVE) == ExponentVector(e_is=2, e_id=2, e_im=1, e_ic=1)


class TestGhzOracle:
    """Test cases comparing built GHZ circuits with their closed forms."""

    @pytest.mark.parametrize("variant", [ALL_TO_ALL, LINEAR, ADAPTIVE], ids=str)
    def test_non_hybrid_matches(self, variant) -> None:
        for n in range(2, 65):
            report = ghz_oracle_report(n, variant)
            assert report.matches, report.to_text()

    def test_hybrids_match_built_form(self) -> None:
        """Test that hybrid circuits match the closed form of the built circuit."""
        for n, variant in hybrid_cases(range(2, 25)):
            report = ghz_oracle_report(n, variant)
            assert report.matches, report.to_text()

    @pytest.mark.slow
    def test_large_hybrids_match_built_form(self) -> None:
        for n, variant in hybrid_cases(range(25, 65)):
            report = ghz_oracle_report(n, variant)
            assert report.matches, report.to_text()

    def test_hybrid_built_vs_published(self) -> None:
        report = hybrid_published_report(12, hybrid_linear(3))
        assert report.expected == ghz_exponents(12, hybrid_linear(3))
        assert report.observed == hybrid_circuit_exponents(12, hybrid_linear(3))

    def test_hybrid_circuit_exponents_rejects_plain_variant(self) -> None:
        with pytest.raises(ValueError, match="hybrid variant"):
            hybrid_circuit_exponents(8, LINEAR)

    def test_parallel_cap_breaks_all_to_all_match(self) -> None:
        assert not ghz_oracle_report(16, ALL_TO_ALL, max_parallel_2q=2).matches


class TestPublished55:
    """Test cases for the printed 55-qubit expressions."""

    def test_linear_agrees(self) -> None:
        linear, _ = published_55_reports()
        assert linear.matches

    def test_adaptive_single_qubit_idle_differs_by_one(self) -> None:
        """Test that the printed adaptive e_is is one above the formula."""
        _, adaptive = published_55_reports()
        assert adaptive.deltas == {"e_is": 1}
        assert "MISMATCH" in adaptive.to_text()

    def test_no_printed_all_to_all(self) -> None:
        with pytest.raises(ValueError, match="No published"):
            published_ghz_exponents(ALL_TO_ALL)


class TestWFormulas:
    """Test cases for W-state closed forms."""

    def test_nonadaptive_small(self) -> None:
        assert w_exponents(4, WVariant.NONADAPTIVE) == ExponentVector(8, 16, 7, 14)
        assert w_exponents(2, WVariant.NONADAPTIVE) == ExponentVector(2, 2, 1, 0)

    def test_nonadaptive_oracle_matches(self) -> None:
        for n in range(2, 17):
            report = w_nonadaptive_oracle_report(n)
            assert report.matches, report.to_text()

    def test_adaptive_exact_cnot_exponent(self) -> None:
        assert w_exponents(2, WVariant.ADAPTIVE_EXACT).e_d == 60

    def test_adaptive_needs_power_of_two(self) -> None:
        with pytest.raises(ValueError, match="power of two"):
            w_exponents(6, WVariant.ADAPTIVE_APPROX)

    def test_approx_uses_fractions(self) -> None:
        exponents = w_exponents(8, WVariant.ADAPTIVE_APPROX)
        assert all(isinstance(value, (int, Fraction)) for value in exponents.as_tuple())

    def test_composition_report(self) -> None:
        report = w_composition_report(4)
        assert report.label == "w adaptive n=4 assembled"
        assert report.expected == w_exponents(4, WVariant.ADAPTIVE_EXACT)


class TestApproxW:
    """Test cases for the postselected W closed forms."""

    def test_four_qubits(self) -> None:
        assert w_approx_acceptance(4) == pytest.approx(7 / 32)
        assert w_approx_fidelity(4) == pytest.approx((7 + 4 * math.sqrt(3)) / 14)

    def test_small_sizes_are_exact(self) -> None:
        assert w_approx_acceptance(1) == pytest.approx(0.5)
        assert w_approx_fidelity(1) == pytest.approx(1.0)
        assert w_approx_fidelity(2) == pytest.approx(1.0)

    def test_fidelity_stays_high(self) -> None:
        for n in (8, 16, 64):
            assert 0.6 < w_approx_fidelity(n) <= 1.0


class TestSubroutineFormulas:
    """Test cases for subroutine exponents and their oracles."""

    def test_ifanout(self) -> None:
        assert IFANOUT_EXPONENTS.as_tuple() == (0, 4, 0, 3, 0, 2, 2)
        assert subroutine_exponents(SubroutineKind.IFANOUT) == IFANOUT_EXPONENTS

    def test_fanout_two(self) -> None:
        assert subroutine_exponents(SubroutineKind.FANOUT, 2).as_tuple() == (5, 8, 4, 5, 3, 5, 5)

    def test_arity_required(self) -> None:
        with pytest.raises(ValueError, match="needs an arity"):
            subroutine_exponents(SubroutineKind.FANOUT)

    def test_fanout_oracle_matches(self) -> None:
        for n in range(2, 9):
            report = subroutine_oracle_report(SubroutineKind.FANOUT, n)
            assert report.matches, report.to_text()

    def test_parity_oracle_deltas(self) -> None:
        """Test that the built parity gate differs only in single-qubit terms."""
        for n in range(2, 7):
            report = subroutine_oracle_report(SubroutineKind.PARITY, n)
            assert report.deltas == {"e_s": 1, "e_is": n - 1}

    def test_no_builder_for_or_gate(self) -> None:
        with pytest.raises(ValueError, match="No circuit builder"):
            subroutine_oracle_report(SubroutineKind.OR_GATE, 4)

    def test_or_gate_pow2_agrees_only_at_two(self) -> None:
        """Test the simplified power-of-two OR-gate formula against the general one."""
        assert subroutine_exponents(SubroutineKind.OR_GATE, 2).e_s == 184
        assert or_gate_pow2_report(2).matches
        assert not or_gate_pow2_report(4).matches

    def test_or_reduction_composition(self) -> None:
        """Test that the assembled OR-reduction differs from the formula only in e_s."""
        for n in (3, 5, 8):
            t = n.bit_length()
            assert or_reduction_composition_report(n).deltas == {"e_s": -2 * t}
