"""Dynamics of the classical spinning particle in the Clifford formalism.

The phase point is (x, pi, psi): position vector, kinetic momentum vector
(pi = p - eA) and even spinor.  The coupled first-order system integrated
here is

    dpsi/dtau  g1 g2 + pi psi g0 = 0      =>  dpsi = -pi psi g0 (g1 g2)^{-1}
    dx/dtau   = psi g0 ~psi
    dpi/dtau  = e F . dx,                 F = del ^ A

with classical fixed-step RK4.  The free case admits closed-form solutions
(helices with internal frequency 2m) which double as integrator oracles.

Units: hbar = c = 1; the default momentum frame is p = m g0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Optional

import numpy as np

from . import _backend
from .blades import BIVECTOR_PAIRS, EVEN_INDICES
from .errors import (ConfigError, InsufficientSpanError, MassShellError,
                     SimulationNumericsError)
from .matrixrep import EVEN_FIRST_COLUMN, matrix_of
from .multivector import (G21, Multivector, exp_bivector, gamma0, gamma5,
                          gamma_upper, geometric_product, inner,
                          minkowski_dot, wedge)
from .spinors import (DHSpinor, dirac_adjoint, spin_tensor_batch,
                      velocity_bilinear, z_to_psi)

__all__ = [
    "EMField", "FreeField", "ConstantField", "PolynomialField", "BZState",
    "Trajectory", "ScenarioConfig", "eom_derivatives", "step_rk4", "simulate",
    "analytic_free_z", "analytic_free_velocity", "trivial_solution",
    "lightlike_helix", "conserved_quantities", "mean_velocity",
    "zbw_frequency",
]

_ETA = np.array([1.0, -1.0, -1.0, -1.0])
_G012 = Multivector.blade("g012")


# ---------------------------------------------------------------------------
# electromagnetic fields
# ---------------------------------------------------------------------------

class EMField:
    """Potential A(x), field bivector F(x) = del ^ A, and coupling charge e."""

    charge: float = 0.0

    def A(self, x: Multivector) -> Multivector:
        raise NotImplementedError

    def F(self, x: Multivector) -> Multivector:
        raise NotImplementedError

    @property
    def constant_F(self) -> Optional[Multivector]:
        """The field bivector when position-independent, else None."""
        return None


class FreeField(EMField):
    """A = 0: the free particle."""

    def __init__(self, charge: float = 0.0):
        self.charge = charge
        self._zero = Multivector(np.zeros(16))

    def A(self, x):
        return self._zero

    def F(self, x):
        return self._zero

    @property
    def constant_F(self):
        return self._zero


class ConstantField(EMField):
    """Uniform field bivector with the linear potential A(x) = -(F . x)/2."""

    def __init__(self, F: Multivector, charge: float):
        if not F.is_grade(2, tol=1e-12):
            raise ValueError("constant field requires a bivector F")
        self.charge = charge
        self._F = F

    def A(self, x):
        return inner(self._F, x) * (-0.5)

    def F(self, x):
        return self._F

    @property
    def constant_F(self):
        return self._F


class PolynomialField(EMField):
    """Potential with polynomial components; F by exact differentiation.

    `terms` is a list of (mu, coeff, powers) entries meaning
    A^mu += coeff * x0^p0 x1^p1 x2^p2 x3^p3.
    """

    def __init__(self, terms, charge: float):
        self.charge = charge
        self.terms = [(int(mu), float(c), tuple(int(p) for p in pw))
                      for mu, c, pw in terms]
        for mu, _, pw in self.terms:
            if not 0 <= mu <= 3 or len(pw) != 4 or min(pw) < 0:
                raise ValueError("bad polynomial term")

    def A(self, x):
        xv = x.vector_part
        comps = np.zeros(4)
        for mu, c, pw in self.terms:
            comps[mu] += c * np.prod([xv[k] ** pw[k] for k in range(4)])
        return Multivector.vector(comps)

    def _partial_A(self, x, nu):
        xv = x.vector_part
        comps = np.zeros(4)
        for mu, c, pw in self.terms:
            if pw[nu] == 0:
                continue
            mono = c * pw[nu] * xv[nu] ** (pw[nu] - 1)
            for k in range(4):
                if k != nu:
                    mono *= xv[k] ** pw[k]
            comps[mu] += mono
        return Multivector.vector(comps)

    def F(self, x):
        out = Multivector(np.zeros(16))
        for nu in range(4):
            out = out + wedge(gamma_upper[nu], self._partial_A(x, nu))
        return out


# ---------------------------------------------------------------------------
# state and trajectory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BZState:
    """Phase point: invariant time, position, kinetic momentum, spinor."""

    tau: float
    x: Multivector
    pi: Multivector
    psi: DHSpinor


class Trajectory:
    """Uniformly sampled run: state arrays plus per-sample diagnostics.

    Stored as arrays for vectorised diagnostics: x, pi hold vector
    components (g0..g3); psi holds 8 even-blade coefficients.  `psidot`
    optionally carries exact spinor derivatives for closed-form builds.
    """

    def __init__(self, tau, x, pi, psi, m, charge=0.0, field=None,
                 config=None, psidot=None):
        self.tau = np.asarray(tau, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.pi = np.asarray(pi, dtype=float)
        self.psi = np.asarray(psi, dtype=float)
        n = len(self.tau)
        if self.x.shape != (n, 4) or self.pi.shape != (n, 4) \
                or self.psi.shape != (n, 8):
            raise ValueError("inconsistent trajectory array shapes")
        self.m = float(m)
        self.charge = float(charge)
        self.field = field
        self.config = config
        self.psidot = None if psidot is None else np.asarray(psidot, dtype=float)

    def __len__(self):
        return len(self.tau)

    @property
    def step(self) -> float:
        return float(self.tau[1] - self.tau[0]) if len(self) > 1 else 0.0

    @cached_property
    def psi16(self) -> np.ndarray:
        full = np.zeros((len(self), 16))
        full[:, EVEN_INDICES] = self.psi
        return full

    @cached_property
    def v(self) -> np.ndarray:
        """Velocity components psi g0 ~psi per sample."""
        p16 = self.psi16
        g0 = np.zeros(16)
        g0[1] = 1.0
        g0psi = _backend.gp_batch(p16, np.broadcast_to(g0, p16.shape).copy())
        v16 = _backend.gp_batch(g0psi, _backend.reversion_batch(p16))
        return v16[:, 1:5]

    @cached_property
    def z(self) -> np.ndarray:
        """Dirac column spinor per sample."""
        return self.psi @ EVEN_FIRST_COLUMN.T

    @cached_property
    def H(self) -> np.ndarray:
        """Scalar <pi v>_0 per sample."""
        return np.einsum("nu,u,nu->n", self.pi, _ETA, self.v)

    @cached_property
    def p(self) -> np.ndarray:
        """Canonical momentum components p = pi + eA(x) per sample."""
        if self.field is None:
            return self.pi
        a = np.array([self.field.A(Multivector.vector(xk)).vector_part
                      for xk in self.x])
        return self.pi + self.charge * a

    @cached_property
    def p2(self) -> np.ndarray:
        return np.einsum("nu,u,nu->n", self.p, _ETA, self.p)

    @cached_property
    def spin(self) -> np.ndarray:
        """Spin tensor S_munu per sample, shape (n, 4, 4)."""
        return spin_tensor_batch(self.z)

    @cached_property
    def J(self) -> np.ndarray:
        """Total angular momentum J_munu = x_mu pi_nu - x_nu pi_mu + S_munu."""
        x_lo = self.x * _ETA
        pi_lo = self.pi * _ETA
        L = np.einsum("nu,nv->nuv", x_lo, pi_lo)
        return L - L.transpose(0, 2, 1) + self.spin

    @cached_property
    def psi_invariants(self) -> np.ndarray:
        """(scalar, pseudoscalar) parts of psi ~psi per sample."""
        pp = _backend.gp_batch(self.psi16, _backend.reversion_batch(self.psi16))
        return pp[:, [0, 15]]

    @cached_property
    def zbarz(self) -> np.ndarray:
        """zbar z = z^dagger G0 z per sample."""
        from .matrixrep import DIRAC_GAMMA
        return np.einsum("na,ab,nb->n", np.conj(self.z),
                         DIRAC_GAMMA[0], self.z).real

    def bivector_components(self, tensor: np.ndarray) -> np.ndarray:
        """Extract the six independent (mu<nu) components of (n,4,4) tensors."""
        return np.stack([tensor[:, mu, nu] for mu, nu in BIVECTOR_PAIRS], axis=1)

    def state(self, k: int) -> BZState:
        return BZState(
            tau=float(self.tau[k]),
            x=Multivector.vector(self.x[k]),
            pi=Multivector.vector(self.pi[k]),
            psi=DHSpinor.from_even(self.psi[k]),
        )

    def psi_mv(self, k: int) -> DHSpinor:
        return DHSpinor.from_even(self.psi[k])


def zbar_z(z: np.ndarray) -> float:
    """The Lorentz scalar bilinear zbar z."""
    return float(np.real(dirac_adjoint(z) @ z))


# ---------------------------------------------------------------------------
# equations of motion and the integrator
# ---------------------------------------------------------------------------

def eom_derivatives(s: BZState, field: EMField
                    ) -> tuple[Multivector, Multivector, Multivector]:
    """(dx, dpi, dpsi) of the coupled system at state s."""
    v = velocity_bilinear(s.psi)
    Fx = field.F(s.x)
    dpi = inner(Fx, v) * field.charge
    # -pi psi g0 (g1 g2)^{-1} = -pi psi g0 g2 g1 = +(pi psi) g012
    dpsi = geometric_product(geometric_product(s.pi, s.psi.mv), _G012)
    return v, dpi, dpsi


_G0_16 = gamma0.coeffs


def _vec16(v4):
    out = np.zeros(16)
    out[1:5] = v4
    return out


def _raw_derivs(x, pi, psi16, field):
    v16 = _backend.gp(_backend.gp(psi16, _G0_16), _backend.reversion(psi16))
    dx = v16[1:5]
    Fx = field.F(Multivector.vector(x))
    if np.any(Fx.coeffs):
        dpi = field.charge * _backend.gp(Fx.coeffs, _vec16(dx))[1:5]
    else:
        dpi = np.zeros(4)
    dpsi = _backend.gp(_backend.gp(_vec16(pi), psi16), _G012.coeffs)
    return dx, dpi, dpsi


def step_rk4(s: BZState, field: EMField, h: float) -> BZState:
    """One classical RK4 step of the full coupled system (any field)."""
    if h < 0:
        raise ValueError("step must be non-negative")
    x, pi, psi = s.x.vector_part, s.pi.vector_part, s.psi.mv.coeffs.copy()

    k1 = _raw_derivs(x, pi, psi, field)
    k2 = _raw_derivs(x + 0.5 * h * k1[0], pi + 0.5 * h * k1[1],
                     psi + 0.5 * h * k1[2], field)
    k3 = _raw_derivs(x + 0.5 * h * k2[0], pi + 0.5 * h * k2[1],
                     psi + 0.5 * h * k2[2], field)
    k4 = _raw_derivs(x + h * k3[0], pi + h * k3[1], psi + h * k3[2], field)

    xn = x + (h / 6.0) * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
    pin = pi + (h / 6.0) * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
    psin = psi + (h / 6.0) * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
    if not (np.isfinite(xn).all() and np.isfinite(pin).all()
            and np.isfinite(psin).all()):
        raise SimulationNumericsError(
            f"non-finite state after step at tau = {s.tau}", tau=s.tau)
    return BZState(s.tau + h, Multivector.vector(xn),
                   Multivector.vector(pin),
                   DHSpinor(Multivector(psin)))


# ---------------------------------------------------------------------------
# scenario configuration
# ---------------------------------------------------------------------------

_BIV_NAMES = ("g01", "g02", "g03", "g12", "g13", "g23")


@dataclass
class ScenarioConfig:
    """Validated simulation scenario (see README for the file format)."""

    m: float
    e: float = 0.0
    field_kind: str = "free"
    field_params: dict = dc_field(default_factory=dict)
    init_kind: str = "z"
    init_values: object = None
    momentum: object = None          # [4 floats] | "align_velocity" | None
    position: object = None
    tau_end: float = None            # default 10*pi/m
    step: float = None               # default 1e-3/m
    normalize_energy: bool = False
    outputs: dict = dc_field(default_factory=dict)
    name: str = "scenario"
    seed: int = 0

    def __post_init__(self):
        if self.m is None or not np.isfinite(self.m) or self.m <= 0:
            raise ConfigError("m must be a positive real", field="m")
        if self.tau_end is None:
            self.tau_end = 10.0 * math.pi / self.m
        if self.step is None:
            self.step = 1e-3 / self.m
        if self.step <= 0:
            raise ConfigError("step must be positive", field="step")
        if self.tau_end < 0:
            raise ConfigError("tau_end must be non-negative", field="tau_end")
        if self.field_kind not in ("free", "constant", "polynomial"):
            raise ConfigError(f"unknown field.kind {self.field_kind!r}",
                              field="field.kind")
        if self.init_kind not in ("z", "rotor"):
            raise ConfigError(f"unknown init.kind {self.init_kind!r}",
                              field="init.kind")
        if self.init_values is None:
            raise ConfigError("init.values is required", field="init.values")

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        if "m" not in d:
            raise ConfigError("missing required key: m", field="m")
        fld = d.get("field", {}) or {}
        init = d.get("init", {}) or {}
        if "kind" not in init:
            raise ConfigError("missing init.kind", field="init.kind")
        return cls(
            m=d["m"],
            e=float(d.get("e", 0.0)),
            field_kind=fld.get("kind", "free"),
            field_params=fld.get("params", {}) or {},
            init_kind=init["kind"],
            init_values=init.get("values"),
            momentum=init.get("momentum"),
            position=init.get("position"),
            tau_end=d.get("tau_end"),
            step=d.get("step"),
            normalize_energy=bool(init.get("normalize_energy", False)),
            outputs=d.get("outputs", {}) or {},
            name=d.get("name", "scenario"),
            seed=int(d.get("seed", 0)),
        )

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        with open(path) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}",
                                  field="<file>") from exc
        cfg = cls.from_dict(data)
        if cfg.name == "scenario":
            import os
            cfg.name = os.path.splitext(os.path.basename(str(path)))[0]
        return cfg

    def to_dict(self) -> dict:
        return {
            "name": self.name, "m": self.m, "e": self.e,
            "field": {"kind": self.field_kind, "params": self.field_params},
            "init": {"kind": self.init_kind, "values": self.init_values,
                     "momentum": self.momentum, "position": self.position,
                     "normalize_energy": self.normalize_energy},
            "tau_end": self.tau_end, "step": self.step,
            "outputs": self.outputs, "seed": self.seed,
        }

    # -- realisation -------------------------------------------------------
    def build_field(self) -> EMField:
        if self.field_kind == "free":
            return FreeField(self.e)
        if self.field_kind == "constant":
            biv = self.field_params.get("bivector")
            if biv is None or len(biv) != 6:
                raise ConfigError("constant field needs field.params.bivector "
                                  "with 6 components", field="field.params.bivector")
            c = np.zeros(16)
            c[5:11] = np.asarray(biv, dtype=float)
            return ConstantField(Multivector(c), self.e)
        terms = self.field_params.get("terms")
        if not terms:
            raise ConfigError("polynomial field needs field.params.terms",
                              field="field.params.terms")
        return PolynomialField(terms, self.e)

    def build_initial_psi(self) -> DHSpinor:
        if self.init_kind == "z":
            vals = np.asarray(self.init_values, dtype=float).ravel()
            if vals.size != 8:
                raise ConfigError("init.values for kind 'z' takes 8 reals "
                                  "(re, im alternating)", field="init.values")
            z = vals[0::2] + 1j * vals[1::2]
            return z_to_psi(z)
        vals = self.init_values
        if not isinstance(vals, dict) or "bivector" not in vals:
            raise ConfigError("init.values for kind 'rotor' takes "
                              "{rho, beta, bivector[6]}", field="init.values")
        biv = np.asarray(vals["bivector"], dtype=float)
        if biv.shape != (6,):
            raise ConfigError("rotor bivector takes 6 components",
                              field="init.values.bivector")
        c = np.zeros(16)
        c[5:11] = biv
        R = exp_bivector(Multivector(c))
        rho = float(vals.get("rho", 1.0))
        beta = float(vals.get("beta", 0.0))
        if rho <= 0:
            raise ConfigError("rho must be positive", field="init.values.rho")
        duality = (Multivector.scalar(math.cos(beta / 2.0))
                   + gamma5 * math.sin(beta / 2.0))
        return DHSpinor(geometric_product(duality, R) * math.sqrt(rho))

    def build_initial_state(self) -> BZState:
        psi = self.build_initial_psi()
        x0 = np.zeros(4) if self.position is None \
            else np.asarray(self.position, dtype=float)
        if x0.shape != (4,):
            raise ConfigError("init.position takes 4 components",
                              field="init.position")
        if self.momentum is None:
            pi0 = np.array([self.m, 0.0, 0.0, 0.0])
        elif self.momentum == "align_velocity":
            v0 = velocity_bilinear(psi).vector_part
            v2 = float(v0 @ (_ETA * v0))
            if v2 <= 0:
                raise ConfigError("cannot align momentum with a non-timelike "
                                  "initial velocity", field="init.momentum")
            pi0 = self.m * v0 / math.sqrt(v2)
        else:
            pi0 = np.asarray(self.momentum, dtype=float)
            if pi0.shape != (4,):
                raise ConfigError("init.momentum takes 4 components",
                                  field="init.momentum")
        if self.normalize_energy:
            v0 = velocity_bilinear(psi).vector_part
            H0 = float(pi0 @ (_ETA * v0))
            if H0 <= 0:
                raise ConfigError("cannot normalize: H(0) <= 0",
                                  field="init.normalize_energy")
            psi = DHSpinor(psi.mv * math.sqrt(self.m / H0))
        return BZState(0.0, Multivector.vector(x0),
                       Multivector.vector(pi0), psi)


def simulate(cfg: ScenarioConfig) -> Trajectory:
    """Integrate the scenario and return the sampled trajectory."""
    field = cfg.build_field()
    s0 = cfg.build_initial_state()
    nsteps = int(round(cfg.tau_end / cfg.step)) if cfg.tau_end > 0 else 0
    tau = cfg.step * np.arange(nsteps + 1)

    state0 = np.concatenate([s0.x.vector_part, s0.pi.vector_part,
                             s0.psi.mv.coeffs])
    fconst = field.constant_F
    if fconst is not None:
        samples, bad = _backend.rk4_const_field(
            state0, fconst.coeffs, field.charge, cfg.step, nsteps)
        if bad >= 0:
            raise SimulationNumericsError(
                f"non-finite state at tau = {bad * cfg.step}",
                tau=bad * cfg.step)
    else:
        samples = np.empty((nsteps + 1, 24))
        samples[0] = state0
        s = s0
        for k in range(nsteps):
            s = step_rk4(s, field, cfg.step)
            samples[k + 1] = np.concatenate(
                [s.x.vector_part, s.pi.vector_part, s.psi.mv.coeffs])

    return Trajectory(
        tau=tau, x=samples[:, 0:4], pi=samples[:, 4:8],
        psi=samples[:, 8:24][:, EVEN_INDICES],
        m=cfg.m, charge=field.charge, field=field, config=cfg.to_dict())


# ---------------------------------------------------------------------------
# closed-form free solutions
# ---------------------------------------------------------------------------

def _slash(p: np.ndarray) -> np.ndarray:
    """Matrix p_mu G^mu for a vector given by upper components."""
    return matrix_of(_vec16(p))


def analytic_free_z(z0: np.ndarray, p, m: float, tau: float,
                    shell_tol: float = 1e-9) -> np.ndarray:
    """Free evolution of the column spinor:
    z(tau) = [cos(m tau) - i (p_mu G^mu / m) sin(m tau)] z(0)."""
    p = p.vector_part if isinstance(p, Multivector) else np.asarray(p, float)
    p2 = float(p @ (_ETA * p))
    if abs(p2 - m * m) > shell_tol:
        raise MassShellError(f"p^2 = {p2} is off the m^2 = {m * m} shell")
    phase = m * tau
    mat = np.cos(phase) * np.eye(4) - 1j * np.sin(phase) * _slash(p) / m
    return mat @ np.asarray(z0, dtype=complex)


def analytic_free_velocity(v0, a0, p, m: float, H: float, tau):
    """Velocity of the free helix:
    v(tau) = (p/m^2) H + [v(0) - (p/m^2) H] cos(2 m tau) + (a(0)/2m) sin(2 m tau).

    Componentwise; tau may be a scalar or an array (appended axis 0).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    v0 = np.asarray(v0, float)
    a0 = np.asarray(a0, float)
    p = p.vector_part if isinstance(p, Multivector) else np.asarray(p, float)
    drift = p * (H / m ** 2)
    tau = np.asarray(tau, dtype=float)
    c = np.cos(2.0 * m * tau)[..., None]
    s = np.sin(2.0 * m * tau)[..., None]
    out = drift + (v0 - drift) * c + (a0 / (2.0 * m)) * s
    return out if out.ndim > 1 else out.reshape(4)


def trivial_solution(m: float, tau: float) -> DHSpinor:
    """psi(tau) = exp(-g2 g1 m tau), the zero-radius (rectilinear) solution."""
    if m <= 0:
        raise ValueError("m must be positive")
    return DHSpinor(exp_bivector(G21 * (-m * tau)))


def lightlike_helix(m: float, zeta0, tau: float, variant: str = "lightlike"
                    ) -> tuple[Multivector, Multivector, Multivector]:
    """Constituent kinematics on the rotor family R = exp(-g2 g1 m tau).

    Returns (u, zeta, radius_vec):
      u          constituent velocity e0 - e2 (light-like) or
                 e0 - e1 - e2 (space-like variant),
      zeta       closed-form integral of d(zeta)/dtau = u,
                 zeta = x(tau) + radius_vec(tau) - radius_vec(0) + zeta0,
      radius_vec rotating radius vector; magnitude 1/(2m) for the
                 light-like variant (helix diameter = Compton wavelength 1/m).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if variant not in ("lightlike", "spacelike"):
        raise ValueError(f"unknown variant {variant!r}")
    R = exp_bivector(G21 * (-m * tau))
    Rrev = ~R
    e = [geometric_product(geometric_product(R, g), Rrev)
         for g in (gamma0, Multivector.blade("g1"), Multivector.blade("g2"))]
    e0, e1, e2 = e
    x = gamma0 * tau
    if variant == "lightlike":
        u = e0 - e2
        radius = e1 * (-1.0 / (2.0 * m))
        radius0 = Multivector.blade("g1", -1.0 / (2.0 * m))
    else:
        u = e0 - e1 - e2
        radius = (e2 - e1) * (1.0 / (2.0 * m))
        radius0 = (Multivector.blade("g2") - Multivector.blade("g1")) \
            * (1.0 / (2.0 * m))
    z0 = zeta0 if isinstance(zeta0, Multivector) else Multivector.vector(zeta0)
    zeta = x + radius - radius0 + z0
    return u, zeta, radius


# ---------------------------------------------------------------------------
# conserved quantities and averages
# ---------------------------------------------------------------------------

def conserved_quantities(s: BZState, field: Optional[EMField] = None):
    """(H, p^2, J_munu, zbar z) at a phase point.

    H = <pi v>_0; p = pi + eA when a field is supplied (pi otherwise);
    J_munu = x_mu pi_nu - x_nu pi_mu + S_munu.
    """
    from .spinors import psi_to_z, spin_tensor
    v = velocity_bilinear(s.psi)
    H = minkowski_dot(s.pi, v)
    p = s.pi if field is None \
        else s.pi + field.A(s.x) * field.charge
    p2 = minkowski_dot(p, p)
    x_lo = s.x.vector_part * _ETA
    pi_lo = s.pi.vector_part * _ETA
    L = np.outer(x_lo, pi_lo)
    J = L - L.T + spin_tensor(psi_to_z(s.psi))
    return H, p2, J, zbar_z(psi_to_z(s.psi))


def _interp_cubic(tau, values, t):
    """Cubic Lagrange interpolation of (n,...) samples at scalar t."""
    j = int(np.searchsorted(tau, t)) - 1
    j = max(1, min(j, len(tau) - 3))
    idx = [j - 1, j, j + 1, j + 2]
    out = 0.0
    for a in idx:
        w = 1.0
        for b in idx:
            if b != a:
                w *= (t - tau[b]) / (tau[a] - tau[b])
        out = out + w * values[a]
    return out


def mean_velocity(traj: Trajectory) -> np.ndarray:
    """Trapezoidal average of v over an integer number of zbw periods pi/m."""
    period = math.pi / traj.m
    span = float(traj.tau[-1] - traj.tau[0])
    if span + 1e-12 < period:
        raise InsufficientSpanError(
            f"trajectory spans {span:.6g} < one zbw period {period:.6g}")
    k = int(math.floor(span / period + 1e-9))
    t_end = traj.tau[0] + k * period
    v = traj.v
    tau = traj.tau
    # last sample at or before t_end; a partial panel covers the remainder
    j = int(np.searchsorted(tau, t_end + 1e-12)) - 1
    j = max(0, min(j, len(tau) - 1))
    # whole-step trapezoid up to sample j-1 -> j, then a partial panel
    total = np.zeros(4)
    if j >= 1:
        total += np.trapezoid(v[:j + 1], tau[:j + 1], axis=0)
    if t_end > tau[j] + 1e-15:
        v_end = _interp_cubic(tau, v, t_end)
        total += 0.5 * (v[j] + v_end) * (t_end - tau[j])
    return total / (k * period)


def zbw_frequency(traj: Trajectory, component: int = 1) -> float:
    """Dominant oscillation frequency of v[component] from zero crossings."""
    y = traj.v[:, component]
    t = traj.tau
    sign_change = np.where(np.diff(np.signbit(y)))[0]
    if len(sign_change) < 2:
        raise InsufficientSpanError(
            "fewer than two zero crossings in the requested component")
    crossings = t[sign_change] - y[sign_change] * (
        (t[sign_change + 1] - t[sign_change])
        / (y[sign_change + 1] - y[sign_change]))
    spacing = np.diff(crossings)
    return math.pi / float(np.mean(spacing))
