"""Equations of motion, integrator, closed-form solutions, conservation."""
import math

import numpy as np
import pytest

from zbwsim import (BZState, ConstantField, FreeField, Multivector,
                    PolynomialField, ScenarioConfig, analytic_free_velocity,
                    analytic_free_z, conserved_quantities, eom_derivatives,
                    gamma0, geometric_product, inner,
                    lightlike_helix, mean_velocity, reversion, simulate,
                    step_rk4, trivial_solution, wedge, zbw_frequency)
from zbwsim.dynamics import zbar_z
from zbwsim.errors import (ConfigError, InsufficientSpanError, MassShellError,
                           SimulationNumericsError)
from zbwsim.frenet import fd_derivative
from zbwsim.multivector import G12, G21
from zbwsim.spinors import DHSpinor, z_to_psi

rng = np.random.default_rng(424242)

GENERIC_Z = [0.55, 0.2, -0.3, 0.45, 0.15, -0.35, 0.4, 0.1]


def free_cfg(m=1.0, step=1e-3, tau_end=None, z=GENERIC_Z, normalize=True):
    return ScenarioConfig(m=m, init_kind="z", init_values=list(z),
                          tau_end=tau_end, step=step,
                          normalize_energy=normalize, name="test")


# --- fields ------------------------------------------------------------------

def _fd_curl_check(field, points, tol=1e-6):
    """F = del ^ A by central finite differences."""
    from zbwsim.multivector import gamma_upper
    h = 1e-5
    for pt in points:
        total = Multivector(np.zeros(16))
        for mu in range(4):
            step = np.zeros(4)
            step[mu] = h
            dA = (field.A(Multivector.vector(pt + step))
                  - field.A(Multivector.vector(pt - step))) / (2.0 * h)
            total = total + wedge(gamma_upper[mu], dA)
        assert (total - field.F(Multivector.vector(pt))).norm() < tol


def test_constant_field_potential_consistent():
    F = Multivector.blade("g12", 0.3) + Multivector.blade("g01", -0.2)
    field = ConstantField(F, charge=1.0)
    pts = rng.normal(scale=2.0, size=(8, 4))
    _fd_curl_check(field, pts)
    for pt in pts:
        assert field.F(Multivector.vector(pt)).allclose(F)


def test_polynomial_field_consistent():
    # A^1 = 0.2 x0^2 x3, A^3 = -0.5 x1 x2
    field = PolynomialField(
        [(1, 0.2, (2, 0, 0, 1)), (3, -0.5, (0, 1, 1, 0))], charge=0.7)
    pts = rng.normal(size=(6, 4))
    _fd_curl_check(field, pts)


def test_constant_field_requires_bivector():
    with pytest.raises(ValueError):
        ConstantField(gamma0, charge=1.0)


# --- equations of motion --------------------------------------------------------

def test_eom_rest_state():
    s = BZState(0.0, Multivector.vector(np.zeros(4)), gamma0,
                DHSpinor(Multivector.scalar(1.0)))
    dx, dpi, dpsi = eom_derivatives(s, FreeField())
    assert dx.allclose(gamma0)
    assert dpi.norm() == 0.0
    # dpsi = -pi psi g0 (g1g2)^{-1} = g1 g2 here, and the equation's
    # residual vanishes
    assert dpsi.allclose(G12, atol=1e-14)
    resid = geometric_product(dpsi, G12) \
        + geometric_product(s.pi, geometric_product(s.psi.mv, gamma0))
    assert resid.norm() < 1e-14


def test_eom_free_momentum_constant():
    s = BZState(0.0, Multivector.vector(rng.normal(size=4)),
                Multivector.vector([1.2, 0.1, -0.3, 0.2]),
                z_to_psi(rng.normal(size=4) + 1j * rng.normal(size=4)))
    _, dpi, _ = eom_derivatives(s, FreeField())
    assert dpi.norm() == 0.0


def test_eom_magnetic_force_orthogonal_to_g0():
    # spatial bivector F: the force on a g0-directed velocity vanishes
    field = ConstantField(G21 * 0.4, charge=1.0)
    s = BZState(0.0, Multivector.vector(np.zeros(4)), gamma0,
                DHSpinor(Multivector.scalar(1.0)))
    dx, dpi, _ = eom_derivatives(s, field)
    assert dx.allclose(gamma0)
    assert inner(dpi, gamma0).scalar_part == 0.0
    assert dpi.norm() < 1e-14


# --- single step -------------------------------------------------------------------

def test_step_h_zero_is_identity():
    s = BZState(0.0, Multivector.vector([0.1, 0, 0, 0]), gamma0,
                z_to_psi(np.array([0.8, 0.1j, 0.2, 0.0])))
    s2 = step_rk4(s, FreeField(), 0.0)
    assert s2.x.allclose(s.x) and s2.pi.allclose(s.pi)
    assert s2.psi.mv.allclose(s.psi.mv)


def test_single_step_fifth_order_local_error():
    z0 = np.array([0.6, 0.3 + 0.2j, -0.1, 0.25j])
    z0 = z0 / np.linalg.norm(z0)
    psi0 = z_to_psi(z0)
    p = np.array([1.0, 0, 0, 0])
    s = BZState(0.0, Multivector.vector(np.zeros(4)),
                Multivector.vector(p), psi0)
    errs = []
    for h in (2e-2, 1e-2):
        stepped = step_rk4(s, FreeField(), h)
        z_exact = analytic_free_z(z0, p, 1.0, h)
        exact = z_to_psi(z_exact)
        errs.append((stepped.psi.mv - exact.mv).norm())
    ratio = errs[0] / errs[1]
    assert 24.0 < ratio < 42.0  # ~2^5 for the local error


# --- simulate ------------------------------------------------------------------------

def test_simulate_zero_span_single_sample():
    traj = simulate(free_cfg(tau_end=0.0))
    assert len(traj) == 1
    assert traj.tau[0] == 0.0


def test_free_velocity_matches_closed_form():
    traj = simulate(free_cfg(tau_end=4.0))
    s0 = traj.state(0)
    _, _, psidot = eom_derivatives(s0, FreeField())
    a0 = (geometric_product(geometric_product(psidot, gamma0),
                            reversion(s0.psi.mv))
          + geometric_product(geometric_product(s0.psi.mv, gamma0),
                              reversion(psidot))).vector_part
    closed = analytic_free_velocity(traj.v[0], a0, traj.pi[0], 1.0,
                                    traj.H[0], traj.tau)
    assert np.abs(traj.v - closed).max() < 1e-9


def test_conservation_on_free_run():
    traj = simulate(free_cfg(tau_end=10.0))
    assert np.abs(traj.H - traj.H[0]).max() < 1e-10
    assert np.abs(traj.pi - traj.pi[0]).max() == 0.0
    assert np.abs(traj.J - traj.J[0]).max() < 1e-10
    assert abs(traj.H[0] - 1.0) < 1e-14  # normalized to H = m


def test_constant_field_momentum_residual():
    cfg = ScenarioConfig(m=1.0, e=1.0, field_kind="constant",
                         field_params={"bivector": [0, 0, 0, 0.05, 0, 0]},
                         init_kind="z", init_values=GENERIC_Z,
                         normalize_energy=True, tau_end=4.0, step=1e-3,
                         name="constF")
    traj = simulate(cfg)
    # pidot = e F . v at integrator order
    pidot = fd_derivative(traj.pi, traj.step)
    F = traj.field.constant_F
    force = np.empty_like(traj.pi)
    for k in range(len(traj)):
        force[k] = inner(F, Multivector.vector(traj.v[k])).vector_part
    resid = np.abs(pidot - force)[2:-2].max()
    assert resid < 5e-6  # O(h^2) finite differencing of pi
    # H stays conserved with the minimal coupling
    assert np.abs(traj.H - traj.H[0]).max() < 1e-9


def test_spin_evolution_identities():
    """FD dS_munu = pi_mu v_nu - pi_nu v_mu and dv_mu = 4 S_munu pi^nu."""
    eta = np.array([1.0, -1.0, -1.0, -1.0])
    for cfg in (free_cfg(tau_end=3.0),
                ScenarioConfig(m=1.0, e=1.0, field_kind="constant",
                               field_params={"bivector": [0, 0.02, 0, 0.04, 0, 0]},
                               init_kind="z", init_values=GENERIC_Z,
                               normalize_energy=True, tau_end=3.0, step=1e-3,
                               name="constF2")):
        traj = simulate(cfg)
        S = traj.spin
        Sdot = fd_derivative(S, traj.step)
        pi_lo, v_lo = traj.pi * eta, traj.v * eta
        piv = np.einsum("nu,nv->nuv", pi_lo, v_lo)
        piv = piv - piv.transpose(0, 2, 1)
        assert np.abs(Sdot - piv)[2:-2].max() < 5e-6
        vdot_lo = fd_derivative(v_lo, traj.step)
        four_s_pi = 4.0 * np.einsum("nuv,nv->nu", S, traj.pi)
        assert np.abs(vdot_lo - four_s_pi)[2:-2].max() < 5e-6


def test_polynomial_path_matches_constant_fast_path():
    """The generic integrator agrees with the constant-field kernel when the
    polynomial potential encodes the same uniform F."""
    f = 0.04
    cfg_const = ScenarioConfig(m=1.0, e=1.0, field_kind="constant",
                               field_params={"bivector": [f, 0, 0, 0, 0, 0]},
                               init_kind="z", init_values=GENERIC_Z,
                               normalize_energy=True, tau_end=0.2, step=1e-3,
                               name="c")
    # A(x) = -(F . x)/2 for F = f g01 is A^0 = (f/2) x1, A^1 = (f/2) x0
    cfg_poly = ScenarioConfig(m=1.0, e=1.0, field_kind="polynomial",
                              field_params={"terms": [
                                  [0, f / 2.0, [0, 1, 0, 0]],
                                  [1, f / 2.0, [1, 0, 0, 0]]]},
                              init_kind="z", init_values=GENERIC_Z,
                              normalize_energy=True, tau_end=0.2, step=1e-3,
                              name="p")
    tc = simulate(cfg_const)
    tp = simulate(cfg_poly)
    assert np.abs(tc.x - tp.x).max() < 1e-12
    assert np.abs(tc.psi - tp.psi).max() < 1e-12
    assert np.abs(tc.pi - tp.pi).max() < 1e-12


def test_simulate_overflow_raises():
    cfg = ScenarioConfig(m=1.0, e=4000.0, field_kind="constant",
                         field_params={"bivector": [50.0, 0, 0, 0, 0, 0]},
                         init_kind="z", init_values=GENERIC_Z,
                         tau_end=2000.0, step=0.9, name="blowup")
    with pytest.raises(SimulationNumericsError):
        simulate(cfg)


def test_zbw_frequency_measurement():
    for m in (0.5, 2.0):
        traj = simulate(free_cfg(m=m, tau_end=6.0 * math.pi / m))
        omega = zbw_frequency(traj, 1)
        assert abs(omega - 2.0 * m) / (2.0 * m) < 1e-3


# --- analytic free solutions -----------------------------------------------------------

def test_analytic_z_tau0():
    z0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.array_equal(analytic_free_z(z0, [1.0, 0, 0, 0], 1.0, 0.0), z0)


def test_analytic_z_half_period_sign_flip():
    z0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    zt = analytic_free_z(z0, [1.0, 0, 0, 0], 1.0, math.pi)
    assert np.abs(zt + z0).max() < 1e-12


def test_analytic_z_norm_conserved_generic_p():
    w = 0.6
    p = np.array([math.cosh(w), 0.0, math.sinh(w), 0.0])
    z0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    ref = zbar_z(z0)
    for tau in rng.uniform(0.0, 10.0, size=20):
        assert abs(zbar_z(analytic_free_z(z0, p, 1.0, tau)) - ref) < 1e-10


def test_analytic_z_off_shell_raises():
    with pytest.raises(MassShellError):
        analytic_free_z(np.ones(4), [1.0, 0.5, 0, 0], 1.0, 0.1)


def test_analytic_zbar_consistent_with_adjoint():
    """zbar(tau) = zbar(0) [cos + i slash(p)/m sin] equals (z(tau))^dag G0."""
    from zbwsim.dynamics import _slash
    from zbwsim.spinors import dirac_adjoint
    w = 0.4
    p = np.array([math.cosh(w), math.sinh(w), 0.0, 0.0])
    z0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    for tau in (0.3, 1.9):
        mat = np.cos(tau) * np.eye(4) + 1j * np.sin(tau) * _slash(p)
        zbar_closed = dirac_adjoint(z0) @ mat
        zbar_adj = dirac_adjoint(analytic_free_z(z0, p, 1.0, tau))
        assert np.abs(zbar_closed - zbar_adj).max() < 1e-12


def test_analytic_velocity_tau0():
    v0 = rng.normal(size=4)
    a0 = rng.normal(size=4)
    got = analytic_free_velocity(v0, a0, [1.0, 0, 0, 0], 1.0, 1.0, 0.0)
    assert np.abs(got - v0).max() < 1e-15


def test_analytic_velocity_constant_case():
    p = np.array([1.0, 0, 0, 0])
    v0 = p  # = p H / m^2 with H = m = 1
    for tau in (0.3, 1.7, 9.2):
        got = analytic_free_velocity(v0, np.zeros(4), p, 1.0, 1.0, tau)
        assert np.abs(got - v0).max() < 1e-15


def test_analytic_velocity_periodicity():
    v0, a0 = rng.normal(size=4), rng.normal(size=4)
    p, m, H = np.array([1.0, 0, 0, 0]), 1.0, 1.0
    for tau in rng.uniform(0.0, 5.0, size=10):
        v1 = analytic_free_velocity(v0, a0, p, m, H, tau)
        v2 = analytic_free_velocity(v0, a0, p, m, H, tau + math.pi / m)
        assert np.abs(v1 - v2).max() < 1e-12


# --- trivial solution --------------------------------------------------------------------

def test_trivial_solution_tau0():
    assert trivial_solution(1.0, 0.0).mv.allclose(Multivector.scalar(1.0))


def test_trivial_solution_satisfies_eom():
    m, p = 1.0, gamma0
    for tau in np.linspace(0.0, 6.0, 100):
        psi = trivial_solution(m, tau)
        psidot = geometric_product(psi.mv, G21) * (-m)
        resid = geometric_product(psidot, G12) \
            + geometric_product(p, geometric_product(psi.mv, gamma0))
        assert resid.norm() < 1e-12


def test_trivial_solution_velocity_g0():
    from zbwsim import velocity_bilinear
    for tau in np.linspace(0.0, 6.0, 25):
        v = velocity_bilinear(trivial_solution(1.0, tau))
        assert (v - gamma0).norm() < 1e-12


# --- light-like helix ----------------------------------------------------------------------

def test_lightlike_u_is_null():
    for tau in np.linspace(0.0, 5.0, 11):
        u, _, _ = lightlike_helix(1.0, np.zeros(4), tau)
        assert abs(inner(u, u).scalar_part) < 1e-12


def test_spacelike_variant_norm():
    for tau in np.linspace(0.0, 5.0, 11):
        u, _, _ = lightlike_helix(1.0, np.zeros(4), tau, "spacelike")
        assert abs(inner(u, u).scalar_part + 1.0) < 1e-12


def test_helix_radius_and_diameter():
    for m in (0.5, 1.0, 3.0):
        _, _, rvec = lightlike_helix(m, np.zeros(4), 0.9)
        radius = math.sqrt(-inner(rvec, rvec).scalar_part)
        assert abs(radius - 1.0 / (2.0 * m)) < 1e-12
        # helix diameter equals the Compton wavelength 1/m
        assert abs(2.0 * radius - 1.0 / m) < 1e-12


def test_zeta_integrates_u():
    m, d = 1.3, 1e-6
    for variant in ("lightlike", "spacelike"):
        for tau in (0.4, 2.1):
            _, zp, _ = lightlike_helix(m, np.zeros(4), tau + d, variant)
            _, zm, _ = lightlike_helix(m, np.zeros(4), tau - d, variant)
            u, _, _ = lightlike_helix(m, np.zeros(4), tau, variant)
            fd = (zp - zm) * (1.0 / (2.0 * d))
            assert (fd - u).norm() < 1e-9


def test_zeta_initial_offset():
    zeta0 = np.array([0.0, 1.0, 2.0, 3.0])
    _, zeta, _ = lightlike_helix(1.0, zeta0, 0.0)
    assert np.abs(zeta.vector_part - zeta0).max() < 1e-15


def test_lightlike_bad_variant():
    with pytest.raises(ValueError):
        lightlike_helix(1.0, np.zeros(4), 0.1, "timelike")


# --- conserved quantities and averages -------------------------------------------------------

def test_conserved_quantities_rest():
    s = BZState(0.0, Multivector.vector(np.zeros(4)), gamma0,
                DHSpinor(Multivector.scalar(1.0)))
    H, p2, J, zz = conserved_quantities(s)
    assert abs(H - 1.0) < 1e-14
    assert abs(p2 - 1.0) < 1e-14
    assert np.abs(J + J.T).max() < 1e-14
    assert abs(zz - 1.0) < 1e-14


def test_mean_velocity_trivial():
    cfg = ScenarioConfig(m=1.0, init_kind="rotor",
                         init_values={"rho": 1.0, "beta": 0.0,
                                      "bivector": [0.0] * 6},
                         tau_end=3.5, step=1e-3, name="triv")
    traj = simulate(cfg)
    assert np.abs(mean_velocity(traj) - np.array([1.0, 0, 0, 0])).max() < 1e-12


def test_mean_velocity_generic_helix():
    traj = simulate(free_cfg(tau_end=1.2 * math.pi))
    assert np.abs(mean_velocity(traj) - traj.pi[0]).max() < 1e-6


def test_mean_velocity_insufficient_span():
    with pytest.raises(InsufficientSpanError):
        mean_velocity(simulate(free_cfg(tau_end=1.0)))


# --- configuration ---------------------------------------------------------------------------

def test_config_missing_m():
    with pytest.raises(ConfigError) as exc:
        ScenarioConfig.from_dict({"init": {"kind": "z", "values": GENERIC_Z}})
    assert exc.value.field == "m"


def test_config_bad_step():
    with pytest.raises(ConfigError):
        free_cfg(step=-1.0)


def test_config_unknown_field_kind():
    with pytest.raises(ConfigError):
        ScenarioConfig(m=1.0, field_kind="dipole", init_kind="z",
                       init_values=GENERIC_Z)


def test_config_momentum_align_velocity():
    cfg = ScenarioConfig(m=1.0, init_kind="rotor",
                         init_values={"rho": 1.0, "beta": 0.0,
                                      "bivector": [0, 0, 0.5, 0, 0, 0]},
                         momentum="align_velocity", tau_end=0.0, step=1e-3)
    s = cfg.build_initial_state()
    v = np.array([math.cosh(1.0), 0.0, 0.0, -math.sinh(1.0)])
    assert np.abs(s.pi.vector_part - v).max() < 1e-12


def test_config_roundtrip_dict():
    cfg = free_cfg(tau_end=1.0)
    again = ScenarioConfig.from_dict(cfg.to_dict())
    assert again.m == cfg.m and again.step == cfg.step
