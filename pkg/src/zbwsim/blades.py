"""Blade combinatorics for the real Clifford algebra Cl(1,3).

Metric signature (+,-,-,-).  A multivector is 16 real coefficients over the
canonical blade basis, ordered by grade and then by ascending index:

    index  0      1    2    3    4     5     6     7     8     9     10
    blade  1      g0   g1   g2   g3    g01   g02   g03   g12   g13   g23
    index  11     12     13     14     15
    blade  g012   g013   g023   g123   g0123

This ordering is the wire-level contract for serialized multivectors
(16 numbers) and even-grade spinors (8 numbers, indices 0,5,6,7,8,9,10,15).

The product sign table is generated once from the anticommutation axioms
(g_mu g_nu + g_nu g_mu = 2 eta_munu) and cross-checked at import time against
an independent 4x4 Dirac matrix representation (see `matrixrep`).  Two
independent derivations guard against sign bugs.
"""
from __future__ import annotations

import numpy as np

METRIC = (1.0, -1.0, -1.0, -1.0)

#: blade bitmasks in canonical order; bit mu set <=> gamma_mu is a factor
BLADE_MASKS = (
    0b0000,
    0b0001, 0b0010, 0b0100, 0b1000,
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100,
    0b0111, 0b1011, 0b1101, 0b1110,
    0b1111,
)

BLADE_NAMES = (
    "1",
    "g0", "g1", "g2", "g3",
    "g01", "g02", "g03", "g12", "g13", "g23",
    "g012", "g013", "g023", "g123",
    "g0123",
)

MASK_TO_INDEX = {m: i for i, m in enumerate(BLADE_MASKS)}
NAME_TO_INDEX = {n: i for i, n in enumerate(BLADE_NAMES)}

GRADES = np.array([bin(m).count("1") for m in BLADE_MASKS], dtype=np.int64)

#: reversion multiplies grade k by (-1)^(k(k-1)/2)
REVERSION_SIGNS = np.array([(-1.0) ** (int(k) * (int(k) - 1) // 2) for k in GRADES])

#: indices of the even subalgebra (scalar, six bivectors, pseudoscalar)
EVEN_INDICES = np.array([0, 5, 6, 7, 8, 9, 10, 15], dtype=np.int64)
VECTOR_INDICES = np.array([1, 2, 3, 4], dtype=np.int64)
BIVECTOR_INDICES = np.array([5, 6, 7, 8, 9, 10], dtype=np.int64)

#: bivector blade index -> (mu, nu) with mu < nu
BIVECTOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def blade_product(mask_a: int, mask_b: int) -> tuple[int, float]:
    """Product of two basis blades: resulting blade mask and sign.

    The sign collects one factor of -1 per transposition needed to interleave
    the factors into ascending order, and one metric factor per repeated
    index.
    """
    sign = 1.0
    for i in range(4):
        if mask_b >> i & 1:
            swaps = bin(mask_a >> (i + 1)).count("1")
            if swaps & 1:
                sign = -sign
    common = mask_a & mask_b
    for i in range(4):
        if common >> i & 1:
            sign *= METRIC[i]
    return mask_a ^ mask_b, sign


def _build_tables():
    idx = np.zeros((16, 16), dtype=np.int64)
    sgn = np.zeros((16, 16))
    for a in range(16):
        for b in range(16):
            m, s = blade_product(BLADE_MASKS[a], BLADE_MASKS[b])
            idx[a, b] = MASK_TO_INDEX[m]
            sgn[a, b] = s
    return idx, sgn


#: MULT_INDEX[i, j], MULT_SIGN[i, j]: blade_i * blade_j = sign * blade_index
MULT_INDEX, MULT_SIGN = _build_tables()

#: square of each basis blade (always +-1)
BLADE_SQUARES = np.array([MULT_SIGN[i, i] for i in range(16)])

# grade of the blade produced by each ordered pair, used to split the
# geometric product into inner (|r-s|) and outer (r+s) parts
_PAIR_GRADE = GRADES[MULT_INDEX]
_GRADE_DIFF = np.abs(GRADES[:, None] - GRADES[None, :])
_GRADE_SUM = GRADES[:, None] + GRADES[None, :]

INNER_MASK = (_PAIR_GRADE == _GRADE_DIFF).astype(np.float64)
WEDGE_MASK = (_PAIR_GRADE == _GRADE_SUM).astype(np.float64)


def _dense_tensor(mask=None):
    t = np.zeros((16, 16, 16))
    s = MULT_SIGN if mask is None else MULT_SIGN * mask
    t[np.arange(16)[:, None], np.arange(16)[None, :], MULT_INDEX] = s
    return t


#: dense structure tensors: (a b)_k = sum_ij T[i,j,k] a_i b_j
GP_TENSOR = _dense_tensor()
INNER_TENSOR = _dense_tensor(INNER_MASK)
WEDGE_TENSOR = _dense_tensor(WEDGE_MASK)
