"""Dirac-Hestenes spinors and their column-spinor translation.

A DH spinor is an even multivector psi; it factors as

    psi = rho^(1/2) * exp(beta*g5/2) * R,        R ~R = 1

with density rho > 0 and duality angle beta (beta = 0 for a pure rotor;
exp(beta*g5) = +1 is the electron convention).  The translation to a
four-component Dirac column spinor z goes through the idempotent
eps = (1 + g0)/2: the representation matrix of psi carries z in its first
column, and conversely the whole matrix is a fixed real-linear function of
z (an 8-real-parameter family matching the even subalgebra exactly).

Right multiplication by g2*g1 on psi corresponds to multiplying z by i.

Conventions pinned here (see also docs in the README):
  * spin bivector   S = R (g2 g1) ~R / 2                       [hbar = 1]
  * spin tensor     S_munu = (i/4) zbar [G_nu, G_mu] z
    The commutator order is chosen so that along solutions of the equations
    of motion   dS_munu/dtau = pi_mu v_nu - pi_nu v_mu,
    dv_mu/dtau = 4 S_munu pi^nu,  and  J = L + S  is conserved.
  * for a pure-rotor psi the two agree through
    S_munu = <S g_nu g_mu>_0.
"""
from __future__ import annotations

import numpy as np

from .blades import GRADES
from .errors import RepresentationError, RotorError, SingularSpinorError
from .matrixrep import DIRAC_GAMMA, DIRAC_GAMMA_UPPER, EVEN_FIRST_COLUMN
from .multivector import (G21, Multivector, from_matrix, gamma0, gamma5,
                          geometric_product, reversion)

__all__ = [
    "DHSpinor", "IDEMPOTENT_REST", "dirac_adjoint", "z_to_psi", "psi_to_z",
    "rotor_decompose", "velocity_bilinear", "spin_bivector", "spin_tensor",
    "z_matrix",
]

_ODD = (GRADES == 1) | (GRADES == 3)

#: eps = (1 + g0)/2, the primitive idempotent selecting the rest-frame column
IDEMPOTENT_REST = (Multivector.scalar(1.0) + gamma0) * 0.5


class DHSpinor:
    """Even-grade multivector wrapper with spinor conveniences."""

    __slots__ = ("mv",)

    def __init__(self, mv: Multivector, tol: float = 1e-10):
        odd = np.abs(mv.coeffs[_ODD]).max()
        if odd > tol * max(1.0, mv.norm()):
            raise ValueError(f"spinor must be even-grade (odd part {odd:.3e})")
        object.__setattr__(self, "mv", mv)

    def __setattr__(self, name, value):
        raise AttributeError("DHSpinor is immutable")

    @classmethod
    def from_even(cls, even8) -> "DHSpinor":
        return cls(Multivector.from_even(even8))

    @property
    def even_coeffs(self) -> np.ndarray:
        return self.mv.even_part

    def norm(self) -> float:
        return self.mv.norm()

    def __repr__(self):
        return f"DHSpinor({self.mv!r})"


def dirac_adjoint(z: np.ndarray) -> np.ndarray:
    """zbar = z^dagger G0."""
    return np.conj(z) @ DIRAC_GAMMA[0]


def z_matrix(z: np.ndarray) -> np.ndarray:
    """The 4x4 matrix representing the even element built from column z."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (4,):
        raise ValueError("z takes 4 complex components")
    z1, z2, z3, z4 = z
    c1, c2, c3, c4 = np.conj(z)
    return np.array([
        [z1, -c2, z3,  c4],
        [z2,  c1, z4, -c3],
        [z3,  c4, z1, -c2],
        [z4, -c3, z2,  c1],
    ])


def z_to_psi(z: np.ndarray) -> DHSpinor:
    """Even multivector carrying the Dirac spinor z in its first column."""
    try:
        mv = from_matrix(z_matrix(z), tol=1e-9)
    except RepresentationError as exc:
        raise RepresentationError(
            "spinor matrix failed the even-subalgebra round trip; "
            "this indicates a sign-convention bug") from exc
    # the image is exactly even; discard conversion dust on odd blades
    clean = mv.coeffs.copy()
    clean[_ODD] = 0.0
    return DHSpinor(Multivector(clean))


def psi_to_z(psi: DHSpinor) -> np.ndarray:
    """First column of the representation matrix: the Dirac spinor."""
    return EVEN_FIRST_COLUMN @ psi.even_coeffs


def psi_norm_invariants(psi: DHSpinor) -> tuple[float, float]:
    """(scalar, pseudoscalar) parts of psi ~psi, i.e. rho cos(beta), rho sin(beta)."""
    pp = geometric_product(psi.mv, reversion(psi.mv))
    return pp.scalar_part, pp["g0123"]


def rotor_decompose(psi: DHSpinor, tol: float = 1e-12
                    ) -> tuple[float, float, Multivector]:
    """Split psi into (rho, beta, R) with psi = rho^(1/2) exp(beta g5/2) R.

    beta is taken in (-pi, pi].  Singular (Majorana-like) spinors with
    psi ~psi = 0 are rejected.
    """
    s, q = psi_norm_invariants(psi)
    rho = float(np.hypot(s, q))
    if rho <= tol * max(1.0, psi.norm() ** 2):
        raise SingularSpinorError("psi * reversion(psi) = 0; no rotor part")
    beta = float(np.arctan2(q, s))
    half = (Multivector.scalar(np.cos(beta / 2.0))
            - gamma5 * np.sin(beta / 2.0))           # exp(-beta g5 / 2)
    R = geometric_product(half, psi.mv) / np.sqrt(rho)
    return rho, beta, R


def velocity_bilinear(psi: DHSpinor) -> Multivector:
    """v = psi g0 ~psi; grade-1, components equal the bilinear zbar G^mu z."""
    v = geometric_product(geometric_product(psi.mv, gamma0), reversion(psi.mv))
    return v.grade(1)


def check_rotor(R: Multivector, tol: float = 1e-10) -> None:
    resid = (geometric_product(R, reversion(R))
             - Multivector.scalar(1.0)).norm()
    if resid > tol:
        raise RotorError(f"R * reversion(R) deviates from 1 by {resid:.3e}")


def spin_bivector(R: Multivector, tol: float = 1e-10) -> Multivector:
    """S = R (g2 g1) ~R / 2, the spin plane transported by the rotor."""
    check_rotor(R, tol)
    return geometric_product(geometric_product(R, G21), reversion(R)) * 0.5


# commutator matrices for the spin tensor, pinned order [G_nu, G_mu]
_SPIN_KERNELS = np.zeros((4, 4, 4, 4), dtype=complex)
for _mu in range(4):
    for _nu in range(4):
        _SPIN_KERNELS[_mu, _nu] = 0.25j * (
            DIRAC_GAMMA[_nu] @ DIRAC_GAMMA[_mu]
            - DIRAC_GAMMA[_mu] @ DIRAC_GAMMA[_nu])
# pre-contract with G0 so rows act on plain conj(z)
_SPIN_KERNELS_BAR = np.einsum("ab,uvbc->uvac", DIRAC_GAMMA[0], _SPIN_KERNELS)


def spin_tensor(z: np.ndarray) -> np.ndarray:
    """Antisymmetric S_munu = (i/4) zbar [G_nu, G_mu] z (both indices down)."""
    z = np.asarray(z, dtype=complex)
    return np.einsum("a,uvab,b->uv", np.conj(z), _SPIN_KERNELS_BAR, z).real


def spin_tensor_batch(zs: np.ndarray) -> np.ndarray:
    """spin_tensor for an (n,4) array of spinors; returns (n,4,4)."""
    return np.einsum("na,uvab,nb->nuv", np.conj(zs), _SPIN_KERNELS_BAR, zs).real


def velocity_bilinear_bz(z: np.ndarray) -> np.ndarray:
    """Matrix-arithmetic oracle for v^mu = zbar G^mu z."""
    zb = dirac_adjoint(z)
    return np.array([(zb @ DIRAC_GAMMA_UPPER[mu] @ z).real for mu in range(4)])
