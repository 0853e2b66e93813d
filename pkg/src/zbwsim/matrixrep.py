"""4x4 Dirac matrix representation of Cl(1,3): the independent oracle.

The four basis vectors are represented by the standard Dirac matrices

    g0 -> diag(1, 1, -1, -1)          gi -> [[0, -sigma_i], [sigma_i, 0]]

(lower-index matrices; gi squares to -1).  Products of these represent the
higher blades.  The map is real-linear and injective on the real algebra,
so it provides an exact cross-check of the combinatorial sign table and a
robust route to inverses.

At import time all 256 ordered blade products are verified against the sign
table with exact integer agreement; a mismatch aborts the import, since it
would mean a sign bug in one of the two derivations.
"""
from __future__ import annotations

import numpy as np

from .blades import BLADE_MASKS, BLADE_SQUARES, EVEN_INDICES, MULT_INDEX, MULT_SIGN
from .errors import RepresentationError, SingularElementError

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

#: lower-index Dirac matrices for g0..g3
DIRAC_GAMMA = np.stack([
    np.block([[_I2, _Z2], [_Z2, -_I2]]),
    np.block([[_Z2, -_S1], [_S1, _Z2]]),
    np.block([[_Z2, -_S2], [_S2, _Z2]]),
    np.block([[_Z2, -_S3], [_S3, _Z2]]),
])

#: upper-index matrices g^mu = eta^munu g_nu
DIRAC_GAMMA_UPPER = np.stack([DIRAC_GAMMA[0], -DIRAC_GAMMA[1],
                              -DIRAC_GAMMA[2], -DIRAC_GAMMA[3]])


def _build_blade_reps() -> np.ndarray:
    reps = np.zeros((16, 4, 4), dtype=complex)
    for i, mask in enumerate(BLADE_MASKS):
        m = np.eye(4, dtype=complex)
        for mu in range(4):
            if mask >> mu & 1:
                m = m @ DIRAC_GAMMA[mu]
        reps[i] = m
    return reps


#: BLADE_REPS[i] is the matrix representing basis blade i
BLADE_REPS = _build_blade_reps()

# flattened for fast to/from conversions
_REPS_FLAT = BLADE_REPS.reshape(16, 16)
# trace projection: coeff_i = blade_square_i * Re tr(M @ rep_i) / 4
_PROJ = (BLADE_SQUARES[:, None] * BLADE_REPS.transpose(0, 2, 1).reshape(16, 16) / 4.0)

#: rows of BLADE_REPS restricted to the even subalgebra, first column only;
#: maps 8 even coefficients to the first matrix column (a Dirac column spinor)
EVEN_FIRST_COLUMN = BLADE_REPS[EVEN_INDICES, :, 0].T.copy()  # (4, 8) complex


def matrix_of(coeffs: np.ndarray) -> np.ndarray:
    """4x4 complex matrix representing the multivector with these coefficients."""
    return (np.asarray(coeffs, dtype=float) @ _REPS_FLAT).reshape(4, 4)


def coeffs_of(matrix: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Blade coefficients of a matrix in the algebra image.

    Uses trace inner products against the 16 blade matrices, then checks the
    round trip; matrices outside the real algebra image raise
    RepresentationError.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise RepresentationError(f"expected a 4x4 matrix, got shape {m.shape}")
    coeffs = (_PROJ @ m.ravel()).real
    scale = max(1.0, np.abs(m).max())
    resid = np.abs(matrix_of(coeffs) - m).max()
    if resid > tol * scale:
        raise RepresentationError(
            f"matrix is not in the Cl(1,3) image (round-trip residual {resid:.3e})")
    return coeffs


def inverse_coeffs(coeffs: np.ndarray, cond_threshold: float = 1e12) -> np.ndarray:
    """Coefficients of the multivector inverse, via matrix inversion."""
    m = matrix_of(coeffs)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_threshold:
        raise SingularElementError(
            f"element is not invertible (condition number {cond:.3e})")
    return coeffs_of(np.linalg.inv(m), tol=1e-7)


def _crosscheck_tables() -> None:
    """Verify all 256 blade products of the sign table against the matrices."""
    for a in range(16):
        ra = BLADE_REPS[a]
        for b in range(16):
            expected = MULT_SIGN[a, b] * BLADE_REPS[MULT_INDEX[a, b]]
            if not np.array_equal(ra @ BLADE_REPS[b], expected):
                raise AssertionError(
                    f"sign table and matrix representation disagree on blade "
                    f"pair ({a}, {b})")


_crosscheck_tables()
