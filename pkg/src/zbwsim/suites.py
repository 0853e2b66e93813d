"""Named acceptance checks, shared by `zbwsim verify` and the test suite.

Each criterion function returns a list of CheckResult rows; a row passes
when its measured value is within tolerance (interval checks carry the
interval in `detail`).  Scenario constants are frozen here so repeated runs
are byte-reproducible:

  * GENERIC_Z0: a fully generic unit spinor (all components engaged) used
    for the closed-form-match, conservation and frequency checks;
  * HELIX_Z0:   z = (cos chi, 0, 0, sin chi), which drives a circular
    space-time helix (spatial velocity circle of radius sin 2chi), used for
    the Frenet/Darboux checks where constant curvatures are expected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .blades import GRADES, MULT_INDEX, MULT_SIGN, REVERSION_SIGNS
from .dynamics import (ScenarioConfig, analytic_free_velocity,
                       lightlike_helix, simulate, trivial_solution,
                       zbw_frequency)
from .frenet import (curvatures_from_frame, darboux_bivector_series,
                     darboux_invariant, darboux_relation_residual,
                     omega_inner_omega, rebuild_darboux,
                     worldline_frame_sequence)
from .matrixrep import BLADE_REPS
from .multivector import (G12, G21, Multivector, gamma0, geometric_product,
                          inner, reversion)
from .spinors import velocity_bilinear
from .verify import (PerturbedField, PlaneWaveFamily, boost_rotor,
                     dirac_hestenes_residual, fd_tolerance,
                     linearization_check, mean_velocity_identity,
                     nonlinear_dirac_residual_on_line, rotation_rotor,
                     spin_mass_identity)

__all__ = ["CheckResult", "CRITERIA", "SUITES", "run_criterion", "run_suite",
           "GENERIC_Z0", "HELIX_Z0"]


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value,
                "tolerance": self.tolerance, "pass": self.passed,
                "detail": self.detail}


def _bound(name, value, tol, detail="") -> CheckResult:
    return CheckResult(name, float(value), float(tol),
                       bool(value <= tol), detail)


# frozen initial spinors
_RAW = np.array([0.55 + 0.2j, -0.3 + 0.45j, 0.15 - 0.35j, 0.4 + 0.1j])
GENERIC_Z0 = _RAW / np.sqrt((np.abs(_RAW) ** 2).sum())
_CHI = 0.15
HELIX_Z0 = np.array([math.cos(_CHI), 0.0, 0.0, math.sin(_CHI)], dtype=complex)


def _z_values(z: np.ndarray) -> list:
    out = np.empty(8)
    out[0::2] = z.real
    out[1::2] = z.imag
    return list(out)


@lru_cache(maxsize=None)
def _free_run(kind: str, m: float, step: float, periods: float = 10.0):
    z0 = {"generic": GENERIC_Z0, "helix": HELIX_Z0}[kind]
    cfg = ScenarioConfig(m=m, init_kind="z", init_values=_z_values(z0),
                         tau_end=periods * math.pi / m, step=step,
                         normalize_energy=True, name=f"{kind}-m{m}-h{step}")
    return simulate(cfg)


@lru_cache(maxsize=None)
def _boosted_rotor_run(step: float):
    cfg = ScenarioConfig(
        m=1.0, init_kind="rotor",
        init_values={"rho": 1.0, "beta": 0.0,
                     "bivector": [0.0, 0.0, 0.5, 0.0, 0.0, 0.0]},
        momentum="align_velocity", tau_end=2.0 * math.pi, step=step,
        name=f"boosted-rotor-h{step}")
    return simulate(cfg)


def _closed_form_error(traj) -> float:
    """Max componentwise deviation of the run from the closed-form velocity."""
    s0 = traj.state(0)
    psidot0 = geometric_product(
        geometric_product(s0.pi, s0.psi.mv), Multivector.blade("g012"))
    a0 = (geometric_product(geometric_product(psidot0, gamma0),
                            reversion(s0.psi.mv))
          + geometric_product(geometric_product(s0.psi.mv, gamma0),
                              reversion(psidot0))).vector_part
    closed = analytic_free_velocity(traj.v[0], a0, traj.pi[0], traj.m,
                                    traj.H[0], traj.tau)
    return float(np.abs(traj.v - closed).max())


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_01_algebra_oracle() -> list:
    worst = 0.0
    for a in range(16):
        for b in range(16):
            lhs = BLADE_REPS[a] @ BLADE_REPS[b]
            rhs = MULT_SIGN[a, b] * BLADE_REPS[MULT_INDEX[a, b]]
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    rev_worst = 0.0
    for i in range(16):
        expected = (-1.0) ** (GRADES[i] * (GRADES[i] - 1) // 2)
        rev_worst = max(rev_worst, abs(REVERSION_SIGNS[i] - expected))
        # reversion as an operation on the blade itself
        blade = np.zeros(16)
        blade[i] = 1.0
        rev_worst = max(rev_worst, float(
            np.abs(blade * REVERSION_SIGNS - expected * blade).max()))
    return [
        _bound("algebra-oracle-256-products", worst, 0.0,
               "exact integer agreement with the Dirac matrix oracle"),
        _bound("reversion-grade-law", rev_worst, 0.0,
               "(-1)^(k(k-1)/2) on all 16 blades"),
    ]


def criterion_02_free_solution() -> list:
    err_h = _closed_form_error(_free_run("generic", 1.0, 1e-3))
    err_h2 = _closed_form_error(_free_run("generic", 1.0, 5e-4))
    ratio = err_h / err_h2
    return [
        _bound("free-closed-form-match", err_h, 1e-6,
               "max |v_sim - v_closed| over tau in [0, 10 pi], h = 1e-3"),
        CheckResult("free-convergence-ratio", float(ratio), 16.0,
                    bool(12.0 <= ratio <= 20.0),
                    "error(h)/error(h/2) expected in [12, 20]"),
    ]


def criterion_03_conservation() -> list:
    traj = _free_run("generic", 1.0, 1e-3)
    h_dev = float(np.abs(traj.H - traj.m).max())
    p2_dev = float(np.abs(traj.p2 - traj.m ** 2).max())
    j_dev = float(np.abs(traj.J - traj.J[0]).max())
    return [
        _bound("conservation-H", h_dev, 1e-8, "|H - m| on the 10-period run"),
        _bound("conservation-p2", p2_dev, 1e-9, "|p^2 - m^2|"),
        _bound("conservation-J", j_dev, 1e-8, "drift of all six J components"),
    ]


def criterion_04_zbw_frequency() -> list:
    out = []
    for m in (0.5, 1.0, 2.0):
        traj = _free_run("generic", m, 1e-3, periods=6.0)
        omega = zbw_frequency(traj, component=1)
        rel = abs(omega - 2.0 * m) / (2.0 * m)
        out.append(_bound(f"zbw-frequency-m{m}", rel, 1e-3,
                          f"zero-crossing omega = {omega:.6f}, expect {2*m}"))
    return out


def _families():
    return [
        ("rest", PlaneWaveFamily(1.0)),
        ("boost-z1.0", PlaneWaveFamily(1.0, boost=boost_rotor(1.0, 3),
                                       base=rotation_rotor(0.4, "g23"))),
        ("boost-x1.3", PlaneWaveFamily(1.0, boost=boost_rotor(1.3, 1))),
    ]


def _family_points():
    return [np.array([t, 0.13 * t, -0.21, 0.35]) for t in np.linspace(0.0, 3.0, 9)]


def criterion_05_linearization() -> list:
    out = []
    pts = _family_points()
    fd_band = fd_tolerance(1e-4)
    for tag, fam in _families():
        rep = linearization_check(fam.p, fam.m, fam, pts, derivatives="closed")
        out.append(_bound(f"dirac-closed-{tag}", rep["dirac"].max_norm, 1e-8))
        out.append(_bound(f"eigenfunction-closed-{tag}",
                          rep["eigenfunction"].max_norm, 1e-8))
        out.append(_bound(f"contracted-closed-{tag}",
                          rep["contracted"].max_norm, 1e-8))
        fd = linearization_check(fam.p, fam.m, fam, pts, derivatives="fd",
                                 spacing=1e-4)
        out.append(_bound(f"dirac-fd-{tag}", fd["dirac"].max_norm, fd_band,
                          "central differences, spacing 1e-4"))
        out.append(_bound(f"eigenfunction-fd-{tag}",
                          fd["eigenfunction"].max_norm, fd_band))
        # nonlinear equation along the stream-line; the rest family also
        # checks the literal inverse-bilinear mass term (adapted frame)
        traj = fam.trajectory(tau_end=2.0 * math.pi, h=1e-3)
        r16 = nonlinear_dirac_residual_on_line(traj, fam.m, momentum=fam.p)
        out.append(_bound(f"nonlinear-closed-{tag}", r16.max_norm, 1e-8))
        if tag == "rest":
            r19 = nonlinear_dirac_residual_on_line(traj, fam.m)
            out.append(_bound("nonlinear-literal-rest", r19.max_norm, 1e-8,
                              "inverse-bilinear mass term, adapted frame"))
        fd_traj = type(traj)(traj.tau, traj.x, traj.pi, traj.psi, traj.m)
        rfd = nonlinear_dirac_residual_on_line(fd_traj, fam.m, momentum=fam.p)
        out.append(_bound(f"nonlinear-fd-{tag}", rfd.max_norm,
                          fd_tolerance(1e-3)))
    # negative control: a perturbed non-solution must fail by >= 10x
    bad = PerturbedField(_families()[0][1], Multivector.blade("g12", 1e-3))
    bad_res = dirac_hestenes_residual(bad, pts, 1.0, derivatives="fd").max_norm
    out.append(CheckResult("negative-control-perturbed", float(bad_res),
                           1e-7, bool(bad_res >= 1e-7),
                           "perturbed field must exceed 10x tolerance"))
    return out


def criterion_06_mean_velocity() -> list:
    traj = _free_run("generic", 1.0, 1e-3, periods=1.5)
    rep = mean_velocity_identity(traj, 1.0)
    return [
        _bound("mean-velocity-identity", rep.max_norm, 1e-6,
               "pairwise <v>_zbw vs p/m vs inverse bilinear"),
        _bound("inverse-bilinear-constancy", rep.details["u_variation"], 1e-8,
               "tau-independence of psi^-1 v ~psi^-1"),
    ]


def criterion_07_spin_mass() -> list:
    fam = PlaneWaveFamily(1.0, boost=boost_rotor(1.0, 3),
                          base=rotation_rotor(0.3, "g13"))
    closed = spin_mass_identity(fam.trajectory(2.0 * math.pi, 1e-3))
    integrated = spin_mass_identity(_boosted_rotor_run(5e-4))
    return [
        _bound("spin-mass-closed-form", closed.max_norm, 1e-12),
        _bound("spin-mass-integrated", integrated.max_norm, 1e-6),
    ]


def criterion_08_lightlike() -> list:
    worst_null = worst_space = worst_radius = 0.0
    for m in (0.5, 1.0, 2.0):
        for tau in np.linspace(0.0, 2.0 * math.pi / m, 17):
            u, _, rvec = lightlike_helix(m, np.zeros(4), tau, "lightlike")
            us, _, _ = lightlike_helix(m, np.zeros(4), tau, "spacelike")
            worst_null = max(worst_null, abs(inner(u, u).scalar_part))
            worst_space = max(worst_space, abs(inner(us, us).scalar_part + 1.0))
            radius = math.sqrt(-inner(rvec, rvec).scalar_part)
            worst_radius = max(worst_radius, abs(radius - 0.5 / m))
    return [
        _bound("lightlike-u-null", worst_null, 1e-12, "u = e0 - e2, u.u = 0"),
        _bound("spacelike-u-norm", worst_space, 1e-12,
               "u = e0 - e1 - e2, u.u = -1"),
        _bound("helix-radius", worst_radius, 1e-9,
               "radius 1/(2m); diameter equals the Compton wavelength"),
    ]


def criterion_09_frenet() -> list:
    out = []
    traj = _free_run("helix", 1.0, 1e-3)
    seq = worldline_frame_sequence(traj)
    curv = curvatures_from_frame(seq)
    sl = slice(2, -2)  # interior samples: one-sided end stencils excluded
    k1, k2, k3 = curv.K1[sl], curv.K2[sl], curv.K3[sl]
    scale = abs(float(np.mean(k1)))
    out.append(_bound("curvature-K1-constancy",
                      float(np.std(k1) / abs(np.mean(k1))), 1e-4,
                      f"K1 = {np.mean(k1):.6f}"))
    out.append(_bound("curvature-K2-constancy",
                      float(np.std(k2) / abs(np.mean(k2))), 1e-4,
                      f"K2 = {np.mean(k2):.6f}"))
    out.append(_bound("curvature-K3-constancy", float(np.std(k3) / scale),
                      1e-4, "K3 = 0 on free helices; std relative to K1"))
    omega = darboux_bivector_series(seq)
    rebuilt = rebuild_darboux(curv, seq)
    out.append(_bound("darboux-rebuild-match",
                      float(np.abs(omega - rebuilt)[sl].max()), 1e-6))
    inv_diff = np.abs(darboux_invariant(curv) - omega_inner_omega(omega))[sl]
    out.append(_bound("darboux-invariant-match", float(inv_diff.max()), 1e-6,
                      "K1^2 - K2^2 - K3^2 vs <Omega Omega>_0"))
    res_h = darboux_relation_residual(seq)["residual"][sl].max()
    traj2 = _free_run("helix", 1.0, 5e-4)
    res_h2 = darboux_relation_residual(
        worldline_frame_sequence(traj2))["residual"][2:-2].max()
    out.append(_bound("darboux-residual-h", float(res_h), fd_tolerance(1e-3),
                      "within the calibrated O(h^2) band"))
    out.append(_bound("darboux-residual-h/2", float(res_h2),
                      fd_tolerance(5e-4)))
    return out


def criterion_10_trivial() -> list:
    m = 1.0
    p = gamma0 * m
    worst_res = worst_v = 0.0
    for tau in np.linspace(0.0, 4.0 * math.pi, 100):
        psi = trivial_solution(m, tau)
        psidot = geometric_product(psi.mv, G21) * (-m)
        res = (geometric_product(psidot, G12)
               + geometric_product(p, geometric_product(psi.mv, gamma0)))
        worst_res = max(worst_res, res.norm())
        worst_v = max(worst_v, (velocity_bilinear(psi) - gamma0).norm())
    return [
        _bound("trivial-eom-residual", worst_res, 1e-12,
               "exp(-g2 g1 m tau) satisfies the free equation of motion"),
        _bound("trivial-velocity", worst_v, 1e-12, "v = g0 at every sample"),
    ]


CRITERIA = {
    1: ("algebra oracle", criterion_01_algebra_oracle),
    2: ("free-solution reproduction", criterion_02_free_solution),
    3: ("conservation", criterion_03_conservation),
    4: ("zbw frequency", criterion_04_zbw_frequency),
    5: ("linearization chain", criterion_05_linearization),
    6: ("mean-velocity identity", criterion_06_mean_velocity),
    7: ("spin-mass identity", criterion_07_spin_mass),
    8: ("light-like kinematics", criterion_08_lightlike),
    9: ("Frenet/Darboux consistency", criterion_09_frenet),
    10: ("trivial solution", criterion_10_trivial),
}

SUITES = {
    "algebra": [1],
    "free": [2, 3, 4, 6],
    "frenet": [7, 8, 9],
    "dirac": [5, 10],
    "all": list(range(1, 11)),
}


def run_criterion(number: int) -> list:
    _, fn = CRITERIA[number]
    return fn()


def run_suite(name: str) -> list:
    """All checks of a named suite as (criterion, CheckResult) pairs."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; "
                       f"choose from {sorted(SUITES)}")
    out = []
    for num in SUITES[name]:
        for check in run_criterion(num):
            out.append((num, check))
    return out
