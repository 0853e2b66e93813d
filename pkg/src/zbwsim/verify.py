"""Residual evaluators tying trajectories and spinor fields to the theory.

Checks implemented:

  * the Dirac equation in its real-algebra form
        del psi g1 g2 + m psi g0 + e A psi = 0
    on spinor fields, with closed-form or finite-difference derivatives;
  * the momentum-eigenfunction property   del psi g2 g1 = p psi
    (the bivector order is pinned so the property holds on the family that
    solves the equation above; with the opposite order the two displayed
    relations are mutually exclusive);
  * the nonlinear equation restricted to a stream-line, where v . del
    reduces to d/dtau:
        dpsi/dtau g1 g2 + m (psi^-1 v ~psi^-1) psi g0 = 0.
    The inverse-bilinear mass term equals p psi g0 exactly when the frame
    is adapted to the momentum (p = m g0); for boosted families pass
    `momentum` to check the covariant stream-line form dpsi g1 g2 +
    pi psi g0 instead -- the two coincide in the adapted frame;
  * the mean-velocity identity <v>_zbw = p/m = psi^-1 v ~psi^-1;
  * the spin-mass identity <p v>_0 = <Omega S>_0 = m.

Finite-difference checks carry an O(h^2) tolerance band whose constant is
calibrated once on the zero-radius closed-form solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from ._backend import gp_batch, reversion_batch
from .blades import EVEN_INDICES
from .dynamics import EMField, Trajectory, mean_velocity
from .errors import MassShellError, SingularSpinorError
from .matrixrep import BLADE_REPS
from .multivector import (G12, G21, Multivector, gamma0, gamma_upper,
                          geometric_product, minkowski_dot)

__all__ = [
    "ResidualReport", "PlaneWaveFamily", "PerturbedField",
    "dirac_hestenes_residual", "eigenfunction_residual",
    "linearization_check", "nonlinear_dirac_residual_on_line",
    "mean_velocity_identity", "spin_mass_identity", "fd_tolerance",
    "boost_rotor", "rotation_rotor",
]

_ETA = np.array([1.0, -1.0, -1.0, -1.0])
_PROJ16 = None  # lazy matrix-projection table for batched from_matrix


@dataclass
class ResidualReport:
    """Per-sample residual norms for one equation tag."""

    equation: str
    sample_points: np.ndarray
    norms: np.ndarray
    tolerance: Optional[float] = None
    details: dict = dc_field(default_factory=dict)

    @property
    def max_norm(self) -> float:
        return float(np.max(self.norms)) if len(self.norms) else 0.0

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.norms ** 2))) if len(self.norms) \
            else 0.0

    @property
    def passed(self) -> Optional[bool]:
        return None if self.tolerance is None else self.max_norm <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "samples": len(self.norms),
            "max": self.max_norm,
            "rms": self.rms,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# eigenfunction families
# ---------------------------------------------------------------------------

def boost_rotor(rapidity: float, axis: int = 3) -> Multivector:
    """Pure boost exp(g0 g_axis * rapidity/2); axis in 1..3."""
    name = f"g0{axis}"
    half = 0.5 * rapidity
    return (Multivector.scalar(math.cosh(half))
            + Multivector.blade(name, math.sinh(half)))


def rotation_rotor(angle: float, plane: str = "g12") -> Multivector:
    """Spatial rotation exp(-B * angle/2) in the given bivector plane."""
    half = 0.5 * angle
    return (Multivector.scalar(math.cos(half))
            - Multivector.blade(plane, math.sin(half)))


class PlaneWaveFamily:
    """Momentum eigenfunction psi(x) = L S exp(-g2 g1 m (x . v)).

    L is a Lorentz rotor (typically a boost) fixing the momentum p = m L g0 ~L
    and S is a spatial rotor (commuting with g0) fixing the spin orientation.
    Closed-form partial derivatives are available, so residuals can be
    checked at machine precision as well as by finite differences.
    """

    def __init__(self, m: float, boost: Optional[Multivector] = None,
                 base: Optional[Multivector] = None):
        if m <= 0:
            raise ValueError("m must be positive")
        self.m = float(m)
        self.L = boost if boost is not None else Multivector.scalar(1.0)
        self.S = base if base is not None else Multivector.scalar(1.0)
        self.v = geometric_product(
            geometric_product(self.L, gamma0), ~self.L).grade(1)
        self.p = self.v * self.m
        self._head = geometric_product(self.L, self.S)
        comm = (geometric_product(self.S, gamma0)
                - geometric_product(gamma0, self.S)).norm()
        if comm > 1e-12 * max(1.0, self.S.norm()):
            raise ValueError("base rotor must commute with g0 "
                             "(spatial rotations only)")

    def phase(self, x: Multivector) -> float:
        return self.m * minkowski_dot(x, self.v)

    def psi(self, x: Multivector) -> Multivector:
        th = self.phase(x)
        rot = Multivector.scalar(math.cos(th)) - G21 * math.sin(th)
        return geometric_product(self._head, rot)

    def partial(self, mu: int, x: Multivector) -> Multivector:
        """Exact d psi / d x^mu."""
        grad = self.m * _ETA[mu] * self.v.coeffs[1 + mu]
        return geometric_product(self.psi(x), G21) * (-grad)

    def trajectory(self, tau_end: float, h: float,
                   x0: Optional[np.ndarray] = None) -> Trajectory:
        """Stream-line restriction as a closed-form Trajectory.

        x(tau) = x0 + v tau, psi(tau) = psi(x(tau)); exact dpsi/dtau is
        attached for machine-precision residual checks.
        """
        n = int(round(tau_end / h))
        tau = h * np.arange(n + 1)
        x0 = np.zeros(4) if x0 is None else np.asarray(x0, dtype=float)
        xs = x0[None, :] + tau[:, None] * self.v.vector_part[None, :]
        psi = np.empty((n + 1, 8))
        psidot = np.empty((n + 1, 8))
        for k in range(n + 1):
            pk = self.psi(Multivector.vector(xs[k]))
            psi[k] = pk.coeffs[EVEN_INDICES]
            psidot[k] = geometric_product(pk, G21).coeffs[EVEN_INDICES] \
                * (-self.m)
        pi = np.broadcast_to(self.p.vector_part, (n + 1, 4)).copy()
        return Trajectory(tau=tau, x=xs, pi=pi, psi=psi, m=self.m,
                          psidot=psidot)


class PerturbedField:
    """Negative control: a family plus a constant bivector offset."""

    def __init__(self, family, offset: Multivector):
        self.family = family
        self.offset = offset

    def psi(self, x):
        return self.family.psi(x) + self.offset

    def partial(self, mu, x):
        return self.family.partial(mu, x)


# ---------------------------------------------------------------------------
# derivative plumbing
# ---------------------------------------------------------------------------

def _as_point(x) -> Multivector:
    return x if isinstance(x, Multivector) else Multivector.vector(x)

def _partials(psi_field, x: Multivector, derivatives: str, spacing: float):
    if derivatives == "closed":
        if not hasattr(psi_field, "partial"):
            raise ValueError("field does not provide closed-form derivatives")
        return [psi_field.partial(mu, x) for mu in range(4)]
    out = []
    for mu in range(4):
        step = np.zeros(4)
        step[mu] = spacing
        plus = psi_field.psi(_as_point(x.vector_part + step))
        minus = psi_field.psi(_as_point(x.vector_part - step))
        out.append((plus - minus) / (2.0 * spacing))
    return out


def _dirac_operator(partials) -> Multivector:
    """del psi = g^mu d_mu psi."""
    out = Multivector(np.zeros(16))
    for mu in range(4):
        out = out + geometric_product(gamma_upper[mu], partials[mu])
    return out


# ---------------------------------------------------------------------------
# field-equation residuals
# ---------------------------------------------------------------------------

def dirac_hestenes_residual(psi_field, points: Sequence, m: float,
                            field: Optional[EMField] = None,
                            derivatives: str = "closed",
                            spacing: float = 1e-4,
                            tolerance: Optional[float] = None
                            ) -> ResidualReport:
    """Residual of  del psi g1 g2 + m psi g0 + e A psi  at the given points."""
    norms = []
    pts = [_as_point(x) for x in points]
    for x in pts:
        psi = psi_field.psi(x)
        if not np.isfinite(psi.coeffs).all():
            raise ArithmeticError(f"non-finite field value at {x!r}")
        dpsi = _dirac_operator(_partials(psi_field, x, derivatives, spacing))
        r = geometric_product(dpsi, G12) \
            + geometric_product(psi, gamma0) * m
        if field is not None:
            r = r + geometric_product(field.A(x), psi) * field.charge
        norms.append(r.norm())
    return ResidualReport("dirac-hestenes", np.array([p.vector_part for p in pts]),
                          np.array(norms), tolerance)


def eigenfunction_residual(psi_field, points: Sequence, p: Multivector,
                           derivatives: str = "closed", spacing: float = 1e-4,
                           tolerance: Optional[float] = None) -> ResidualReport:
    """Residual of the momentum-eigenfunction property del psi g2 g1 = p psi."""
    norms = []
    pts = [_as_point(x) for x in points]
    for x in pts:
        psi = psi_field.psi(x)
        dpsi = _dirac_operator(_partials(psi_field, x, derivatives, spacing))
        r = geometric_product(dpsi, G21) - geometric_product(p, psi)
        norms.append(r.norm())
    return ResidualReport("eigenfunction", np.array([p_.vector_part for p_ in pts]),
                          np.array(norms), tolerance)


def linearization_check(p: Multivector, m: float, psi_field, points: Sequence,
                        derivatives: str = "closed", spacing: float = 1e-4,
                        tolerance: Optional[float] = None,
                        shell_tol: float = 1e-9) -> dict:
    """The linearization chain on a momentum-eigenfunction family.

    Returns reports for (i) the eigenfunction property, (ii) the
    momentum-contracted equation  p . del psi g1 g2 + m p psi g0 = 0,
    (iii) the Dirac equation residual.
    """
    p2 = minkowski_dot(p, p)
    if abs(p2 - m * m) > shell_tol:
        raise MassShellError(f"p^2 = {p2} is off the m^2 = {m * m} shell")
    eig = eigenfunction_residual(psi_field, points, p, derivatives, spacing,
                                 tolerance)
    norms = []
    pts = [_as_point(x) for x in points]
    pup = p.vector_part
    for x in pts:
        psi = psi_field.psi(x)
        parts = _partials(psi_field, x, derivatives, spacing)
        pdot = Multivector(sum(pup[mu] * parts[mu].coeffs for mu in range(4)))
        r = geometric_product(pdot, G12) \
            + geometric_product(p, geometric_product(psi, gamma0)) * m
        norms.append(r.norm())
    contracted = ResidualReport(
        "momentum-contracted", np.array([q.vector_part for q in pts]),
        np.array(norms), tolerance)
    dirac = dirac_hestenes_residual(psi_field, points, m, None, derivatives,
                                    spacing, tolerance)
    return {"eigenfunction": eig, "contracted": contracted, "dirac": dirac}


# ---------------------------------------------------------------------------
# stream-line (trajectory) residuals
# ---------------------------------------------------------------------------

def _proj16():
    global _PROJ16
    if _PROJ16 is None:
        from .blades import BLADE_SQUARES
        _PROJ16 = (BLADE_SQUARES[:, None]
                   * BLADE_REPS.transpose(0, 2, 1).reshape(16, 16) / 4.0)
    return _PROJ16


def _inverse_bilinear(traj: Trajectory) -> np.ndarray:
    """psi^-1 v ~psi^-1 per sample, as (n,16) coefficients."""
    psi16 = traj.psi16
    pp = gp_batch(psi16, reversion_batch(psi16))
    rho = np.hypot(pp[:, 0], pp[:, 15])
    bad = rho <= 1e-12 * np.maximum(1.0, np.abs(psi16).max() ** 2)
    if bad.any():
        k = int(np.argmax(bad))
        raise SingularSpinorError(
            f"singular spinor at tau = {traj.tau[k]}; inverse undefined")
    rep = np.einsum("ni,iab->nab", psi16, BLADE_REPS)
    rep_rev = np.einsum("ni,iab->nab", reversion_batch(psi16), BLADE_REPS)
    v16 = np.zeros((len(traj), 16))
    v16[:, 1:5] = traj.v
    rep_v = np.einsum("ni,iab->nab", v16, BLADE_REPS)
    mats = np.linalg.inv(rep) @ rep_v @ np.linalg.inv(rep_rev)
    return np.einsum("ik,nk->ni", _proj16(), mats.reshape(len(traj), 16)).real


def _psidot16(traj: Trajectory) -> tuple[np.ndarray, bool]:
    """(n,16) spinor derivative: exact when attached, else O(h^2) FD."""
    n = len(traj)
    out = np.zeros((n, 16))
    if traj.psidot is not None:
        out[:, EVEN_INDICES] = traj.psidot
        return out, True
    from .frenet import fd_derivative
    out[:, EVEN_INDICES] = fd_derivative(traj.psi, traj.step)
    return out, False


def nonlinear_dirac_residual_on_line(traj: Trajectory, m: float,
                                     momentum=None,
                                     tolerance: Optional[float] = None
                                     ) -> ResidualReport:
    """Stream-line residual of the nonlinear equation.

    With `momentum=None` the mass term is the literal inverse-bilinear form
    m (psi^-1 v ~psi^-1) psi g0 (valid check when the run's momentum frame
    is p = m g0).  Passing the run's momentum vector checks the equivalent
    covariant stream-line form  dpsi g1 g2 + pi psi g0.
    """
    psidot, exact = _psidot16(traj)
    psi16 = traj.psi16
    g0b = np.broadcast_to(gamma0.coeffs, psi16.shape).copy()
    psig0 = gp_batch(psi16, g0b)
    if momentum is None:
        u = _inverse_bilinear(traj)
        mass = m * gp_batch(u, psig0)
    else:
        p = momentum.vector_part if isinstance(momentum, Multivector) \
            else np.asarray(momentum, dtype=float)
        p16 = np.zeros((len(traj), 16))
        p16[:, 1:5] = p
        mass = gp_batch(p16, psig0)
    g12b = np.broadcast_to(G12.coeffs, psi16.shape).copy()
    res = gp_batch(psidot, g12b) + mass
    norms = np.linalg.norm(res, axis=1)
    return ResidualReport("nonlinear-streamline", traj.tau, norms, tolerance,
                          details={"exact_derivative": exact})


def mean_velocity_identity(traj: Trajectory, m: float,
                           tolerance: float = 1e-6) -> ResidualReport:
    """Pairwise agreement of <v>_zbw, p/m and psi^-1 v ~psi^-1."""
    vbar = mean_velocity(traj)
    p_over_m = traj.pi[0] / m
    u = _inverse_bilinear(traj)[:, 1:5]
    d_ab = np.abs(vbar - p_over_m).max()
    d_ac = np.abs(u - vbar[None, :]).max(axis=1)
    d_bc = np.abs(u - p_over_m[None, :]).max(axis=1)
    norms = np.maximum(d_ab, np.maximum(d_ac, d_bc))
    return ResidualReport(
        "mean-velocity-identity", traj.tau, norms, tolerance,
        details={
            "mean_v": vbar, "p_over_m": p_over_m,
            "u_variation": float(np.abs(u - u[0]).max()),
        })


def spin_mass_identity(traj: Trajectory,
                       tolerance: Optional[float] = None) -> ResidualReport:
    """Per-sample deviations of <p v>_0 and <Omega S>_0 from m."""
    from .frenet import darboux_bivector_series, rotor_frame_sequence
    m = traj.m
    pv = np.einsum("nu,u,nu->n", traj.pi, _ETA, traj.v)

    psi16 = traj.psi16
    pp = gp_batch(psi16, reversion_batch(psi16))
    rho = np.hypot(pp[:, 0], pp[:, 15])
    beta = np.arctan2(pp[:, 15], pp[:, 0])
    half = np.zeros_like(psi16)
    half[:, 0] = np.cos(beta / 2.0)
    half[:, 15] = -np.sin(beta / 2.0)
    R = gp_batch(half, psi16) / np.sqrt(rho)[:, None]
    g21b = np.broadcast_to(G21.coeffs, R.shape).copy()
    S = 0.5 * gp_batch(gp_batch(R, g21b), reversion_batch(R))

    if traj.psidot is not None:
        # exact route, valid on rotor families (rho, beta constant)
        psidot16 = np.zeros_like(psi16)
        psidot16[:, EVEN_INDICES] = traj.psidot
        Rdot = gp_batch(half, psidot16) / np.sqrt(rho)[:, None]
        omega = 2.0 * gp_batch(Rdot, reversion_batch(R))
        omega[:, :5] = 0.0
        omega[:, 11:] = 0.0
    else:
        seq = rotor_frame_sequence(traj)
        omega = darboux_bivector_series(seq)
    omega_s = gp_batch(omega, S)[:, 0]

    norms = np.maximum(np.abs(pv - m), np.abs(omega_s - m))
    return ResidualReport("spin-mass-identity", traj.tau, norms, tolerance,
                          details={"pv": pv, "omega_s": omega_s})


# ---------------------------------------------------------------------------
# finite-difference tolerance calibration
# ---------------------------------------------------------------------------

_FD_CONSTANT = None


def fd_tolerance(h: float, floor: float = 1e-6, safety: float = 20.0) -> float:
    """max(floor, C h^2): the O(h^2) band, with C calibrated once on the
    zero-radius closed-form solution."""
    global _FD_CONSTANT
    if _FD_CONSTANT is None:
        from .dynamics import ScenarioConfig, simulate
        cfg = ScenarioConfig(
            m=1.0, init_kind="rotor",
            init_values={"rho": 1.0, "beta": 0.0,
                         "bivector": [0.0] * 6},
            tau_end=2.0, step=2e-3, name="fd-calibration")
        traj = simulate(cfg)
        rep = nonlinear_dirac_residual_on_line(traj, m=1.0)
        _FD_CONSTANT = rep.max_norm / (2e-3) ** 2
    return max(floor, safety * _FD_CONSTANT * h * h)
