"""Closed-form success-probability exponents for every protocol.

All functions return an ExponentVector of exact integers, except the
approximate adaptive W exponents, which contain halves and are returned as
Fractions.
"""

import math
from enum import Enum
from fractions import Fraction
from typing import Optional

from ..models.error_model import ExponentVector
from ..protocols.ghz import GhzFamily, GhzVariant


class WVariant(Enum):
    NONADAPTIVE = "nonadaptive"
    ADAPTIVE_EXACT = "adaptive-exact"
    ADAPTIVE_APPROX = "adaptive-approx"


class SubroutineKind(Enum):
    FANOUT = "fanout"
    PARITY = "parity"
    IFANOUT = "ifanout"
    OR_REDUCTION = "or-reduction"
    OR_GATE = "or-gate"
    OR_GATE_POW2 = "or-gate-pow2"
    UNCOMPRESS = "uncompress"
    COMPRESS = "compress"
    EQUAL_I = "equal-i"
    CZ_TARGET = "cz-target"


def ceil_log2(n: int) -> int:
    """ceil(log2 n) for n >= 1, in exact integer arithmetic."""
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def _ceil_half(x: int) -> int:
    return -(-x // 2)


def exact_log2(n: int) -> int:
    """k with n = 2^k.

    Raises:
        ValueError: If n is not a power of two
    """
    if n < 1 or n & (n - 1):
        raise ValueError(f"n={n} must be a power of two")
    return n.bit_length() - 1


def _require(n: int, minimum: int, what: str) -> None:
    if n < minimum:
        raise ValueError(f"{what} requires n >= {minimum}, got n={n}")


def block_depth(g: int, pattern: GhzFamily) -> int:
    """Number of CNOT layers of a non-adaptive GHZ block of g qubits."""
    if pattern is GhzFamily.ALL_TO_ALL:
        return ceil_log2(g)
    return _ceil_half(g) if g >= 2 else 0


def _hybrid_block_size(n: int, variant: GhzVariant) -> int:
    assert variant.k is not None
    if n % variant.k != 0:
        raise ValueError(f"Block count k={variant.k} must divide n={n}")
    return n // variant.k


def ghz_exponents(n: int, variant: GhzVariant) -> ExponentVector:
    """Published GHZ success-probability exponents.

    Args:
        n: Number of GHZ qubits, at least 2
        variant: GHZ construction

    Raises:
        ValueError: If n < 2 or a hybrid block count does not divide n
    """
    _require(n, 2, "GHZ formulas")
    family = variant.family
    if family is GhzFamily.ALL_TO_ALL:
        return ExponentVector(1, n - 1, n - 1, n * (ceil_log2(n) - 2) + 2)
    if family is GhzFamily.LINEAR:
        return ExponentVector(1, n - 1, n - 1, n * (_ceil_half(n) - 2) + 2)
    if family is GhzFamily.ADAPTIVE:
        return ExponentVector(n + n // 2, n + _ceil_half(n) - 1, 2 * (n - 1), 2, n - 1, n, n)
    k = variant.k
    assert k is not None
    depth = block_depth(_hybrid_block_size(n, variant), variant.block_pattern)
    return ExponentVector(
        2 * k + n // 2,
        3 * n - k + _ceil_half(n) - 1,
        n + k - 2,
        (n + k) * depth + 2,
        k - 1,
        n,
        n,
    )


def hybrid_circuit_exponents(n: int, variant: GhzVariant) -> ExponentVector:
    """Exponents of the hybrid circuit as built by ``build_ghz``.

    With g = n/k and L the block depth, the blocks share one H layer and L CNOT
    layers, the fusion adds two CNOT layers over n+k-1 live qubits, and the
    final correction layer charges half of the n-g corrected qubits.
    """
    if not variant.is_hybrid:
        raise ValueError("hybrid_circuit_exponents needs a hybrid variant")
    _require(n, 2, "GHZ formulas")
    k = variant.k
    assert k is not None
    g = _hybrid_block_size(n, variant)
    depth = block_depth(g, variant.block_pattern)
    corrected = _ceil_half(n - g)
    return ExponentVector(
        k + corrected,
        2 * n - 1 - corrected,
        n + k - 2,
        depth * (n + k - 1) + 2,
        k - 1,
        n,
        n,
    )


def ghz_idle_exponents(n: int, variant: GhzVariant) -> ExponentVector:
    """Exponents of the probability that an extra qubit survives idling through the circuit."""
    _require(n, 2, "GHZ formulas")
    family = variant.family
    if family is GhzFamily.ALL_TO_ALL:
        return ExponentVector(e_is=1, e_id=ceil_log2(n))
    if family is GhzFamily.LINEAR:
        return ExponentVector(e_is=1, e_id=_ceil_half(n))
    if family is GhzFamily.ADAPTIVE:
        return ExponentVector(e_is=2, e_id=2, e_im=1, e_ic=1)
    depth = block_depth(_hybrid_block_size(n, variant), variant.block_pattern)
    return ExponentVector(e_is=2, e_id=depth + 2, e_im=1, e_ic=1)


def w_exponents(n: int, variant: WVariant) -> ExponentVector:
    """W-state success-probability exponents.

    Adaptive variants use k = log2 n and t = ceil(log2(k+1)).

    Raises:
        ValueError: If n < 2, or n is not a power of two for an adaptive variant
    """
    _require(n, 2, "W formulas")
    if variant is WVariant.NONADAPTIVE:
        return ExponentVector(3 * n - 4, n * (2 * n - 5) + 4, 3 * n - 5, n * (3 * n - 11) + 10)
    k = exact_log2(n)
    t = k.bit_length()
    if variant is WVariant.ADAPTIVE_EXACT:
        return _w_adaptive_exact(n, k, t)
    h = Fraction(1, 2)
    e_im = 33 * n * k * t + 11 * n * k - 12 * n * t + 10 * n - 4 * k
    return ExponentVector(
        71 * n * k * t * h + 37 * n * k * h + 3 * n * k - 8 * n * t - n + k,
        125 * n * k * t * h + 47 * n * k * h - 22 * n * t + 21 * n - 13 * k,
        Fraction(37 * n * k * t + 9 * n * k - 18 * n * t - 5 * n - 8 * k),
        Fraction(22 * n * k * t + 16 * n * k + 2 * n * t + 17 * n + 4 * k),
        Fraction(22 * n * k * t + 6 * n * k - 10 * n * t - n - 4 * k),
        Fraction(e_im),
        Fraction(e_im),
    )


def _w_adaptive_exact(n: int, k: int, t: int) -> ExponentVector:
    T = 2**t
    half = 2 ** (t - 1)
    e_s = (
        22 * n * k * t
        + 14 * n * k
        + 2 * n * _ceil_half(T - 1)
        + n * (3 * T + _ceil_half(k))
        + 2 * n * t * (5 * T - 2)
        + 3 * k
        + 4 * k * _ceil_half(n - 1)
        + 2 * n * (2 * k - T - 1) * _ceil_half(t - 1)
        + 4 * n * t * _ceil_half(k - 1)
        + 2 * n * t * _ceil_half(half - 1)
        + 2 * n * _ceil_half(T - 1)
    )
    e_is = (
        46 * n * k * t
        + 20 * n * k
        + 3 * n * T
        - 18 * n * t
        + 21 * n
        - 11 * k
        + n * (k // 2)
        + 2 * n * (2 * k + T - 1) * ((t - 1) // 2)
        + 4 * n * t * ((k - 1) // 2)
        + 2 * n * t * ((half - 1) // 2)
        + 2 * n * ((T - 1) // 2)
        + 11 * n * t * T
        + 4 * k * ((n - 1) // 2)
    )
    e_im = 24 * n * k * t + 11 * n * k + 3 * n * t * (3 * T - 4) + 10 * n - 4 * k
    return ExponentVector(
        e_s,
        e_is,
        28 * n * k * t + 7 * n * k + 9 * n * t * (T - 2) + 2 * n * T - 5 * n - 8 * k,
        16 * n * k * t + 14 * n * k + 2 * n * t * (3 * T + 1) + 2 * n * T + 17 * n + 4 * k,
        16 * n * k * t + 6 * n * k + 2 * n * t * (3 * T - 5) - n - 4 * k,
        e_im,
        e_im,
    )


def _fanout(n: int) -> ExponentVector:
    return ExponentVector(
        2 * n + _ceil_half(n - 1),
        5 * n + (n - 1) // 2 - 2,
        3 * n - 2,
        2 * n + 1,
        2 * n - 1,
        3 * n - 1,
        3 * n - 1,
    )


def _parity(n: int) -> ExponentVector:
    fanout = _fanout(n)
    return ExponentVector(
        4 * n + _ceil_half(n - 1) - 1,
        3 * n + (n - 1) // 2 - 1,
        fanout.e_d,
        fanout.e_id,
        fanout.e_m,
        fanout.e_im,
        fanout.e_ic,
    )


def _or_reduction(n: int) -> ExponentVector:
    t = n.bit_length()
    return ExponentVector(
        11 * n * t + 2 * (n * _ceil_half(t - 1) + t * _ceil_half(n - 1)) + 2 * t,
        23 * n * t + 2 * n * ((t - 1) // 2) + 2 * t * ((n - 1) // 2) - 4 * (n + t),
        14 * n * t - 4 * (n + t),
        8 * n * t + 2 * (n + t),
        8 * n * t - 2 * (n + t),
        12 * n * t - 2 * (n + t),
        12 * n * t - 2 * (n + t),
    )


def _or_gate(n: int) -> ExponentVector:
    t = n.bit_length()
    T = 2**t
    half = 2 ** (t - 1)
    e_s = (
        22 * n * t
        + 2 * (2 * n - T - 1) * _ceil_half(t - 1)
        + 4 * t * _ceil_half(n - 1)
        + 2 * t * _ceil_half(half - 1)
        + 2 * _ceil_half(T - 1)
        + 10 * t * T
        + 3 * T
        - 4 * t
        - 2
    )
    e_is = (
        2 * (2 * n + T - 1) * ((t - 1) // 2)
        + 4 * t * ((n - 1) // 2)
        + 2 * t * ((half - 1) // 2)
        + 2 * ((T - 1) // 2)
        + 46 * n * t
        - 8 * n
        - 18 * t
        + 11 * t * T
        + 3 * T
        - 5
    )
    e_im = 24 * n * t - 4 * n - 12 * t + 9 * t * T
    return ExponentVector(
        e_s,
        e_is,
        28 * n * t - 8 * n - 18 * t + 9 * t * T + 2 * T - 6,
        16 * n * t + 4 * n + 2 * t + 6 * t * T + 2 * T + 2,
        16 * n * t - 4 * n - 10 * t + 6 * t * T - 2,
        e_im,
        e_im,
    )


def _or_gate_pow2(n: int) -> ExponentVector:
    k = exact_log2(n)
    e_im = 42 * n * k + 38 * n - 12 * k - 12
    return ExponentVector(
        42 * n * k + 50 * n - 4 * k + 2 * (2 * k - 2 * n + 1) * _ceil_half(k) + 6 * (k + 1) * _ceil_half(n - 1) - 6,
        68 * n * k + 68 * n - 18 * k + 2 * (4 * n - 1) * (k // 2) + 6 * (k + 1) * ((n - 1) // 2) - 25,
        46 * n * k + 42 * n - 18 * k - 24,
        28 * n * k + 36 * n + 2 * k + 4,
        28 * n * k + 24 * n - 10 * k - 12,
        e_im,
        e_im,
    )


IFANOUT_EXPONENTS = ExponentVector(e_is=4, e_id=3, e_im=2, e_ic=2)


def _equal_i(k: int) -> ExponentVector:
    return _or_gate(k) + ExponentVector(e_s=2 * k, e_is=2)


def _cz_target(k: int) -> ExponentVector:
    return _fanout(k + 1) + ExponentVector(e_s=2 * k, e_is=2)


def _uncompress(n: int) -> ExponentVector:
    k = exact_log2(n)
    return (
        ExponentVector(e_s=k, e_is=n * k + n - k)
        + _fanout(n).scaled(2 * k)
        + IFANOUT_EXPONENTS.scaled(2 * n)
        + _equal_i(k).scaled(n)
    )


def _compress(n: int) -> ExponentVector:
    k = exact_log2(n)
    return (
        ExponentVector(e_s=2 * k, e_is=2 * (n * k + n - k))
        + _fanout(n).scaled(2 * k)
        + IFANOUT_EXPONENTS.scaled(2 * n)
        + _cz_target(k).scaled(n)
    )


def subroutine_exponents(kind: SubroutineKind, n: Optional[int] = None) -> ExponentVector:
    """Exponents of an adaptive subroutine.

    Args:
        kind: Subroutine
        n: Arity (for EQUAL_I and CZ_TARGET: the register size k); unused
            for IFANOUT

    Raises:
        ValueError: If n is missing or outside the formula's domain
    """
    if kind is SubroutineKind.IFANOUT:
        return IFANOUT_EXPONENTS
    if n is None:
        raise ValueError(f"{kind.value} needs an arity")
    if kind in (SubroutineKind.UNCOMPRESS, SubroutineKind.COMPRESS, SubroutineKind.OR_GATE_POW2):
        _require(n, 2, kind.value)
    else:
        _require(n, 1, kind.value)
    builders = {
        SubroutineKind.FANOUT: _fanout,
        SubroutineKind.PARITY: _parity,
        SubroutineKind.OR_REDUCTION: _or_reduction,
        SubroutineKind.OR_GATE: _or_gate,
        SubroutineKind.OR_GATE_POW2: _or_gate_pow2,
        SubroutineKind.UNCOMPRESS: _uncompress,
        SubroutineKind.COMPRESS: _compress,
        SubroutineKind.EQUAL_I: _equal_i,
        SubroutineKind.CZ_TARGET: _cz_target,
    }
    return builders[kind](n)


def w_approx_acceptance(n: int) -> float:
    """Probability of measuring odd parity after n rotations of the approximate W circuit."""
    _require(n, 1, "Approximate W")
    return (1 - ((n - 1) / n) ** (n / 2)) / 2


def w_approx_fidelity(n: int) -> float:
    """Fidelity with W_n of the state kept after an odd-parity outcome.

    Only the n weight-one strings overlap with W_n, each with probability
    c^(2(n-1)) s^2 where c, s are the cosine and sine of half the rotation.
    """
    _require(n, 1, "Approximate W")
    cos_theta = math.sqrt((n - 1) / n)
    c2 = (1 + cos_theta) / 2
    s2 = (1 - cos_theta) / 2
    return n * c2 ** (n - 1) * s2 / w_approx_acceptance(n)
