"""Single-qubit gate matrices shared by decomposition and simulation."""

import math
from typing import Optional, Sequence

import numpy as np

_SQRT2_INV = 1 / math.sqrt(2)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    """Return RY(theta) = exp(-i theta Y / 2)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    """Return RZ(phi) = exp(-i phi Z / 2)."""
    return np.array(
        [[np.exp(-0.5j * phi), 0], [0, np.exp(0.5j * phi)]], dtype=complex
    )


def matrix_to_entries(matrix: np.ndarray) -> tuple:
    """Flatten a 2x2 matrix into a hashable row-major tuple of complex numbers."""
    return tuple(complex(v) for v in np.asarray(matrix, dtype=complex).reshape(-1))


def entries_to_matrix(entries: Sequence[complex]) -> np.ndarray:
    return np.array(entries, dtype=complex).reshape(2, 2)


def is_unitary(matrix: np.ndarray, tolerance: float = 1e-9) -> bool:
    matrix = np.asarray(matrix, dtype=complex)
    identity = np.eye(matrix.shape[0])
    return bool(np.allclose(matrix @ matrix.conj().T, identity, atol=tolerance))


def single_qubit_matrix(
    name: str, angle: Optional[float] = None, entries: Optional[Sequence[complex]] = None
) -> np.ndarray:
    """Look up the 2x2 matrix of a single-qubit gate by kind name.

    Args:
        name: Gate kind value ("H", "X", "Z", "RY", "RZ" or "U")
        angle: Rotation angle for RY and RZ
        entries: Row-major entries for a generic gate "U"

    Returns:
        Complex 2x2 unitary

    Raises:
        ValueError: If the gate is unknown or its parameters are missing
    """
    if name == "H":
        return HADAMARD
    if name == "X":
        return PAULI_X
    if name == "Z":
        return PAULI_Z
    if name in ("RY", "RZ"):
        if angle is None:
            raise ValueError(f"{name} requires an angle")
        return ry_matrix(angle) if name == "RY" else rz_matrix(angle)
    if name == "U":
        if entries is None:
            raise ValueError("Generic gate requires matrix entries")
        return entries_to_matrix(entries)
    raise ValueError(f"Unknown single-qubit gate: {name}")
