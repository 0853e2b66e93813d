"""Pure-NumPy compute kernels.

Fallback twin of the compiled `_kernels_c` extension: identical call
signatures and semantics, selected by `_backend` when the extension is
unavailable (or forced via ZBWSIM_BACKEND=python).

State layout used by the integrator kernels, 24 doubles per sample:
    [0:4]   x    position, vector coefficients (g0..g3)
    [4:8]   pi   kinetic momentum, vector coefficients
    [8:24]  psi  spinor, full 16-coefficient multivector (odd part zero)
"""
from __future__ import annotations

import numpy as np

from .blades import GP_TENSOR, MULT_INDEX, MULT_SIGN, REVERSION_SIGNS

BACKEND_NAME = "python"

_IDX_FLAT = MULT_INDEX.ravel()
_SIGN_FLAT = MULT_SIGN.ravel()
# flattened structure tensor for batched products: (n,256) @ (256,16)
_GP_FLAT = GP_TENSOR.reshape(256, 16)

# gamma0 gamma2 gamma1 = -g012; the equation of motion
# dpsi = -(pi psi) g0 g2 g1 therefore reads dpsi = +(pi psi) g012
_G012_COLUMN = GP_TENSOR[:, 11, :].copy()          # right multiply by blade g012
_G0_COLUMN = GP_TENSOR[:, 1, :].copy()             # right multiply by blade g0


def gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Geometric product of two 16-coefficient multivectors."""
    w = (a[:, None] * b[None, :]).ravel() * _SIGN_FLAT
    return np.bincount(_IDX_FLAT, weights=w, minlength=16)


def gp_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise geometric product of (n,16) coefficient arrays."""
    outer = a[:, :, None] * b[:, None, :]
    return outer.reshape(a.shape[0], 256) @ _GP_FLAT


def reversion(a: np.ndarray) -> np.ndarray:
    return a * REVERSION_SIGNS


def reversion_batch(a: np.ndarray) -> np.ndarray:
    return a * REVERSION_SIGNS[None, :]


def _derivs(pi4, psi16, fmat, charge):
    """Time derivatives (dx, dpi, dpsi) for a position-independent field.

    dx   = psi g0 ~psi                      (grade-1 coefficients)
    dpi  = e * (F . dx)                     (fmat is the linear map v -> F.v)
    dpsi = -(pi psi) g0 g2 g1 = (pi psi) g012
    """
    v16 = gp(psi16 @ _G0_COLUMN, psi16 * REVERSION_SIGNS)
    dx = v16[1:5]
    dpi = charge * (fmat @ dx) if fmat is not None else np.zeros(4)
    pi16 = np.zeros(16)
    pi16[1:5] = pi4
    dpsi = gp(pi16, psi16) @ _G012_COLUMN
    return dx, dpi, dpsi


def field_matrix(fcoeffs: np.ndarray) -> np.ndarray:
    """4x4 matrix M with (F . v)_vector = M @ v_vector for bivector F."""
    m = np.zeros((4, 4))
    for nu in range(4):
        v = np.zeros(16)
        v[1 + nu] = 1.0
        m[:, nu] = gp(fcoeffs, v)[1:5]
    return m


def rk4_const_field(state0: np.ndarray, fcoeffs, charge: float, h: float,
                    nsteps: int) -> tuple[np.ndarray, int]:
    """Integrate the equations of motion with classical RK4, fixed step.

    Valid for position-independent F (free case: fcoeffs None or zero).
    Returns (samples, bad_step); samples has shape (nsteps+1, 24) and
    bad_step is -1 on success, else the first step index that produced a
    non-finite state.
    """
    fmat = None
    if fcoeffs is not None and np.any(fcoeffs):
        fmat = field_matrix(np.asarray(fcoeffs, dtype=float))

    out = np.empty((nsteps + 1, 24))
    out[0] = state0
    x = state0[0:4].copy()
    pi = state0[4:8].copy()
    psi = state0[8:24].copy()

    # non-finite states are detected and reported through bad_step, so the
    # transient overflow warnings on a diverging run are redundant
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(nsteps):
            dx1, dp1, ds1 = _derivs(pi, psi, fmat, charge)
            dx2, dp2, ds2 = _derivs(pi + 0.5 * h * dp1, psi + 0.5 * h * ds1,
                                    fmat, charge)
            dx3, dp3, ds3 = _derivs(pi + 0.5 * h * dp2, psi + 0.5 * h * ds2,
                                    fmat, charge)
            dx4, dp4, ds4 = _derivs(pi + h * dp3, psi + h * ds3, fmat, charge)
            x = x + (h / 6.0) * (dx1 + 2.0 * (dx2 + dx3) + dx4)
            pi = pi + (h / 6.0) * (dp1 + 2.0 * (dp2 + dp3) + dp4)
            psi = psi + (h / 6.0) * (ds1 + 2.0 * (ds2 + ds3) + ds4)
            out[k + 1, 0:4] = x
            out[k + 1, 4:8] = pi
            out[k + 1, 8:24] = psi
            if not (np.isfinite(psi[0]) and np.isfinite(x).all()
                    and np.isfinite(pi).all() and np.isfinite(psi).all()):
                return out, k + 1
    return out, -1
