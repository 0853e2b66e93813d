"""Multivectors of the spacetime algebra Cl(1,3), signature (+,-,-,-).

A `Multivector` is an immutable array of 16 real coefficients over the
canonical blade basis of `blades`.  All operations are pure functions.
Natural units hbar = c = 1 throughout.

The complex structure of Dirac theory is carried by the bivector g2*g1
acting by right multiplication on even elements; coefficients stay real.
"""
from __future__ import annotations

from numbers import Real
from typing import Iterable

import numpy as np

from . import _backend, matrixrep
from .blades import (BLADE_NAMES, EVEN_INDICES, GRADES, INNER_TENSOR,
                     NAME_TO_INDEX, REVERSION_SIGNS, WEDGE_TENSOR)
from .errors import DivergenceError

__all__ = [
    "Multivector", "geometric_product", "grade_projection", "reversion",
    "inner", "wedge", "exp_bivector", "inverse", "matrix_rep", "from_matrix",
    "scalar", "vector", "blade", "ONE", "ZERO", "gamma", "gamma0", "gamma1",
    "gamma2", "gamma3", "gamma5", "G21", "G12",
]

_GRADE_MASKS = [(GRADES == k).astype(float) for k in range(5)]


class Multivector:
    """Immutable element of Cl(1,3): 16 real blade coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float]):
        arr = np.asarray(coeffs, dtype=float)
        if arr.shape != (16,):
            raise ValueError(f"expected 16 coefficients, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # --- construction helpers -------------------------------------------
    @classmethod
    def scalar(cls, value: float) -> "Multivector":
        c = np.zeros(16)
        c[0] = value
        return cls(c)

    @classmethod
    def vector(cls, components: Iterable[float]) -> "Multivector":
        """Vector from 4 components (coefficients of g0..g3, upper index)."""
        v = np.asarray(components, dtype=float)
        if v.shape != (4,):
            raise ValueError("a vector takes 4 components")
        c = np.zeros(16)
        c[1:5] = v
        return cls(c)

    @classmethod
    def blade(cls, name: str, weight: float = 1.0) -> "Multivector":
        c = np.zeros(16)
        c[NAME_TO_INDEX[name]] = weight
        return cls(c)

    @classmethod
    def from_even(cls, even8: Iterable[float]) -> "Multivector":
        """Even element from 8 coefficients in canonical even-blade order."""
        e = np.asarray(even8, dtype=float)
        if e.shape != (8,):
            raise ValueError("an even element takes 8 coefficients")
        c = np.zeros(16)
        c[EVEN_INDICES] = e
        return cls(c)

    # --- basic queries ---------------------------------------------------
    def grade(self, k: int) -> "Multivector":
        """Grade-k part; the zero multivector for k outside 0..4."""
        if k < 0 or k > 4:
            return ZERO
        return Multivector(self.coeffs * _GRADE_MASKS[k])

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def vector_part(self) -> np.ndarray:
        """Components of the grade-1 part (coefficients of g0..g3)."""
        return self.coeffs[1:5].copy()

    @property
    def even_part(self) -> np.ndarray:
        """8 coefficients of the even-grade part, canonical even order."""
        return self.coeffs[EVEN_INDICES].copy()

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector (basis-fixed)."""
        return float(np.linalg.norm(self.coeffs))

    def is_grade(self, k: int, tol: float = 1e-12) -> bool:
        rest = self.coeffs * (1.0 - _GRADE_MASKS[k])
        return bool(np.abs(rest).max() <= tol * max(1.0, self.norm()))

    def __getitem__(self, key) -> float:
        if isinstance(key, str):
            key = NAME_TO_INDEX[key]
        return float(self.coeffs[key])

    # --- algebra ----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector(other.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Multivector(self.coeffs * float(other))
        if isinstance(other, Multivector):
            return Multivector(_backend.gp(self.coeffs, other.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Multivector(self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Multivector(self.coeffs / float(other))
        return NotImplemented

    def __xor__(self, other):
        """Outer (wedge) product."""
        if isinstance(other, Multivector):
            return wedge(self, other)
        return NotImplemented

    def __or__(self, other):
        """Grade-lowering inner product <A_r B_s>_|r-s|."""
        if isinstance(other, Multivector):
            return inner(self, other)
        return NotImplemented

    def __invert__(self):
        """Reversion."""
        return Multivector(self.coeffs * REVERSION_SIGNS)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0.0))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c != 0.0:
                terms.append(f"{c:+.6g}*{BLADE_NAMES[i]}" if i else f"{c:+.6g}")
        return "Multivector<0>" if not terms else " ".join(terms).lstrip("+")


def _coerce(x):
    if isinstance(x, Multivector):
        return x
    if isinstance(x, Real):
        return Multivector.scalar(float(x))
    return NotImplemented


# --- free-function operation surface --------------------------------------

def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Full Clifford product ab."""
    return Multivector(_backend.gp(a.coeffs, b.coeffs))


def grade_projection(a: Multivector, k: int) -> Multivector:
    """<a>_k; zero multivector outside grades 0..4."""
    return a.grade(k)


def reversion(a: Multivector) -> Multivector:
    """Reverse the order of vector factors: grade k picks up (-1)^(k(k-1)/2)."""
    return ~a


def inner(a: Multivector, b: Multivector) -> Multivector:
    """Grade-wise inner product: <A_r B_s>_|r-s| extended by bilinearity."""
    return Multivector(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, INNER_TENSOR))


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Grade-wise outer product: <A_r B_s>_(r+s) extended by bilinearity."""
    return Multivector(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, WEDGE_TENSOR))


def exp_bivector(B: Multivector, tol: float = 1e-14,
                 max_terms: int = 64) -> Multivector:
    """Exponential of a bivector (a rotor generator).

    Closed trigonometric/hyperbolic forms are used when B^2 is a scalar;
    otherwise the power series is summed until the term norm drops below
    `tol`.  Exceeding `max_terms` raises DivergenceError.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not B.is_grade(2, tol=1e-12):
        raise ValueError("exp_bivector requires a grade-2 argument")
    b2 = B * B
    s = b2.scalar_part
    if b2.allclose(Multivector.scalar(s), atol=1e-15 * max(1.0, abs(s))):
        if s < 0.0:
            theta = np.sqrt(-s)
            if theta < 1e-150:
                return ONE + B
            return Multivector.scalar(np.cos(theta)) + B * (np.sin(theta) / theta)
        theta = np.sqrt(s)
        if theta < 1e-150:
            return ONE + B
        return Multivector.scalar(np.cosh(theta)) + B * (np.sinh(theta) / theta)

    term = ONE
    total = ONE
    for n in range(1, max_terms + 1):
        term = term * B / n
        total = total + term
        if term.norm() < tol:
            return total
    raise DivergenceError(
        f"bivector exponential did not converge in {max_terms} terms "
        f"(|B| = {B.norm():.3g})")


def inverse(a: Multivector, cond_threshold: float = 1e12) -> Multivector:
    """Multivector inverse via the matrix representation.

    Correct for every invertible element, not just versors.  Raises
    SingularElementError when the representing matrix is ill-conditioned.
    """
    return Multivector(matrixrep.inverse_coeffs(a.coeffs, cond_threshold))


def matrix_rep(a: Multivector) -> np.ndarray:
    """4x4 complex Dirac-representation matrix of a."""
    return matrixrep.matrix_of(a.coeffs)


def from_matrix(M: np.ndarray, tol: float = 1e-9) -> Multivector:
    """Multivector whose representation is M; RepresentationError otherwise."""
    return Multivector(matrixrep.coeffs_of(M, tol=tol))


# --- module constants -----------------------------------------------------

ZERO = Multivector(np.zeros(16))
ONE = Multivector.scalar(1.0)
gamma0 = Multivector.blade("g0")
gamma1 = Multivector.blade("g1")
gamma2 = Multivector.blade("g2")
gamma3 = Multivector.blade("g3")
gamma5 = Multivector.blade("g0123")
gamma = (gamma0, gamma1, gamma2, gamma3)
#: gamma^mu with the index raised by the metric
gamma_upper = (gamma0, -gamma1, -gamma2, -gamma3)

G21 = gamma2 * gamma1
G12 = gamma1 * gamma2


def scalar(value: float) -> Multivector:
    return Multivector.scalar(value)


def vector(components) -> Multivector:
    return Multivector.vector(components)


def blade(name: str, weight: float = 1.0) -> Multivector:
    return Multivector.blade(name, weight)


def minkowski_dot(a: Multivector, b: Multivector) -> float:
    """Scalar product of two vectors, signature (+,-,-,-)."""
    return inner(a, b).scalar_part
