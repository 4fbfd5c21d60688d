"""Crossover thresholds between adaptive and non-adaptive preparations.

Under first-order assumptions on the success terms (single-qubit gates and
their idling are free, measurements cost like CNOTs, measurement and classical
idling cost like CNOT idling), an adaptive protocol beats its baseline iff
p_d >= p_id ** T for a threshold exponent T. Equivalently, with both logs
negative, iff ln(p_d) / ln(p_id) <= T.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

from ..models.error_model import ExponentVector, SuccessTerms
from ..protocols.ghz import ADAPTIVE, ALL_TO_ALL, LINEAR, GhzVariant, hybrid_all, hybrid_linear
from .formulas import WVariant, ceil_log2, exact_log2, ghz_exponents, w_exponents

logger = logging.getLogger(__name__)

Threshold = Union[Fraction, float]

DEFAULT_SCAN_CAP = 4096


class Comparison(Enum):
    ALL_VS_ADAPTIVE = "all"
    LINEAR_VS_ADAPTIVE = "linear"
    HYBRID_ALL = "hybrid-all"
    HYBRID_LINEAR = "hybrid-linear"
    W_STATE = "w"

    @property
    def needs_k(self) -> bool:
        return self in (Comparison.HYBRID_ALL, Comparison.HYBRID_LINEAR)


@dataclass(frozen=True)
class CrossoverResult:
    """Threshold exponent of one comparison at one size."""

    n: int
    comparison: Comparison
    threshold_exponent: Threshold
    k: Optional[int] = None

    def adaptive_wins(self, ratio: float) -> bool:
        """True when ln(p_d)/ln(p_id) = ``ratio`` lies at or below the threshold."""
        return ratio <= float(self.threshold_exponent)


@dataclass(frozen=True)
class ReducedInequality:
    """p_d ** d_exponent >= p_id ** id_exponent, the first-order form of P(adaptive) >= P(base)."""

    d_exponent: Union[int, Fraction]
    id_exponent: Union[int, Fraction]

    @property
    def threshold(self) -> Fraction:
        if self.d_exponent == 0:
            raise ValueError("Comparison has no CNOT-exponent difference")
        return Fraction(self.id_exponent) / Fraction(self.d_exponent)

    def slack(self, threshold: Threshold) -> Union[Fraction, float]:
        """d * T - id: zero when the inequality is tight at p_d = p_id ** T."""
        return self.d_exponent * threshold - self.id_exponent

    def ratio_bound(self, epsilon: float) -> float:
        """Advantage (1 + epsilon) ** d guaranteed at p_d = (1 + epsilon) p_id ** T."""
        return (1 + epsilon) ** float(self.d_exponent)


def _check_hybrid(n: int, k: Optional[int]) -> int:
    if k is None:
        raise ValueError("Hybrid comparisons require k")
    if k <= 1:
        raise ValueError("Hybrid comparisons require k >= 2")
    if n % k != 0:
        raise ValueError(f"Block count k={k} must divide n={n}")
    return n // k


def crossover(n: int, comparison: Comparison, k: Optional[int] = None) -> CrossoverResult:
    """Threshold exponent of ``comparison`` at size n.

    Args:
        n: Number of qubits (n >= 2; n >= 3 for the W comparison)
        comparison: Which adaptive/baseline pair to compare
        k: Block count for hybrid comparisons

    Returns:
        CrossoverResult; thresholds are exact Fractions except for W

    Raises:
        ValueError: For sizes outside the domain or k <= 1 on hybrids
    """
    if n < 2:
        raise ValueError("Crossover needs n >= 2")
    if comparison is Comparison.ALL_VS_ADAPTIVE:
        threshold: Threshold = Fraction(n, n - 1) * (Fraction(ceil_log2(n), 2) - 2)
    elif comparison is Comparison.LINEAR_VS_ADAPTIVE:
        threshold = Fraction(n, n - 1) * (Fraction(-(-n // 2), 2) - 2)
    elif comparison is Comparison.HYBRID_ALL:
        g = _check_hybrid(n, k)
        assert k is not None
        depth = ceil_log2(g)
        threshold = Fraction(n * (ceil_log2(n) - depth - 4) - k * depth, 2 * (k - 1))
    elif comparison is Comparison.HYBRID_LINEAR:
        g = _check_hybrid(n, k)
        assert k is not None
        depth = -(-g // 2)
        threshold = Fraction(n * (-(-n // 2) - depth - 4) - k * depth, 2 * (k - 1))
    else:
        if n < 3:
            raise ValueError("The W threshold needs n >= 3")
        log_n = math.log2(n)
        threshold = 3 * n / (59 * log_n * math.log2(log_n))
    return CrossoverResult(n, comparison, threshold, k if comparison.needs_k else None)


def cost_ratio(terms: SuccessTerms) -> float:
    """ln(p_d) / ln(p_id).

    Raises:
        ValueError: Unless 0 < p_id < 1 and 0 < p_d <= 1
    """
    if not 0.0 < terms.p_id < 1.0:
        raise ValueError("p_id must lie strictly between 0 and 1")
    if not 0.0 < terms.p_d <= 1.0:
        raise ValueError("p_d must lie in (0, 1]")
    return math.log(terms.p_d) / math.log(terms.p_id)


def candidate_sizes(
    comparison: Comparison, k: Optional[int] = None, cap: int = DEFAULT_SCAN_CAP
) -> Iterator[int]:
    """Sizes scanned for a comparison, in increasing order up to ``cap``."""
    if comparison.needs_k:
        if k is None or k <= 1:
            raise ValueError("Hybrid comparisons require k >= 2")
        yield from range(k, cap + 1, k)
    elif comparison is Comparison.W_STATE:
        n = 4
        while n <= cap:
            yield n
            n *= 2
    else:
        yield from range(2, cap + 1)


def min_n_adaptive_wins(
    terms: SuccessTerms,
    comparison: Comparison,
    k: Optional[int] = None,
    cap: int = DEFAULT_SCAN_CAP,
) -> Optional[int]:
    """Smallest n at which the adaptive protocol wins, or None if none up to ``cap``."""
    ratio = cost_ratio(terms)
    for n in candidate_sizes(comparison, k, cap):
        if crossover(n, comparison, k).adaptive_wins(ratio):
            logger.info("%s: adaptive wins from n=%d (ratio %.4f)", comparison.value, n, ratio)
            return n
    logger.info("%s: no winning n up to %d (ratio %.4f)", comparison.value, cap, ratio)
    return None


def threshold_table(
    comparison: Comparison, sizes: List[int], k: Optional[int] = None
) -> List[Tuple[int, float]]:
    return [(n, float(crossover(n, comparison, k).threshold_exponent)) for n in sizes]


def reduced_inequality(adaptive: ExponentVector, baseline: ExponentVector) -> ReducedInequality:
    """First-order reduction of P(adaptive) >= P(baseline).

    Single-qubit terms drop out, p_m is replaced by p_d and p_im, p_ic by
    p_id; what remains is compared as p_d ** d >= p_id ** id.
    """
    d_adaptive = adaptive.e_d + adaptive.e_m
    d_baseline = baseline.e_d + baseline.e_m
    id_adaptive = adaptive.e_id + adaptive.e_im + adaptive.e_ic
    id_baseline = baseline.e_id + baseline.e_im + baseline.e_ic
    return ReducedInequality(d_adaptive - d_baseline, id_baseline - id_adaptive)


def comparison_exponents(
    n: int, comparison: Comparison, k: Optional[int] = None
) -> Tuple[ExponentVector, ExponentVector]:
    """(adaptive, baseline) exponent vectors compared by ``comparison``."""
    if comparison is Comparison.ALL_VS_ADAPTIVE:
        return ghz_exponents(n, ADAPTIVE), ghz_exponents(n, ALL_TO_ALL)
    if comparison is Comparison.LINEAR_VS_ADAPTIVE:
        return ghz_exponents(n, ADAPTIVE), ghz_exponents(n, LINEAR)
    if comparison is Comparison.HYBRID_ALL:
        _check_hybrid(n, k)
        assert k is not None
        return ghz_exponents(n, hybrid_all(k)), ghz_exponents(n, ALL_TO_ALL)
    if comparison is Comparison.HYBRID_LINEAR:
        _check_hybrid(n, k)
        assert k is not None
        return ghz_exponents(n, hybrid_linear(k)), ghz_exponents(n, LINEAR)
    exact_log2(n)
    return w_exponents(n, WVariant.ADAPTIVE_APPROX), w_exponents(n, WVariant.NONADAPTIVE)


def w_reduced_exponents(n: int) -> ReducedInequality:
    """Reduced inequality of approximate adaptive W against the cascade."""
    adaptive, baseline = comparison_exponents(n, Comparison.W_STATE)
    return reduced_inequality(adaptive, baseline)


def ratio_at_threshold(
    n: int,
    comparison: Comparison,
    p_id: float,
    epsilon: float,
    k: Optional[int] = None,
) -> Tuple[float, float]:
    """Numeric check of the advantage at p_d = (1 + epsilon) p_id ** T.

    Evaluates both protocols with first-order terms and returns
    (P(adaptive)/P(baseline), (1 + epsilon) ** d).
    """
    adaptive, baseline = comparison_exponents(n, comparison, k)
    reduced = reduced_inequality(adaptive, baseline)
    threshold = float(reduced.threshold)
    p_d = (1 + epsilon) * p_id**threshold
    log_ratio = float(reduced.d_exponent) * math.log(p_d) - float(reduced.id_exponent) * math.log(p_id)
    return math.exp(log_ratio), reduced.ratio_bound(epsilon)
