"""Frenet tetrads, curvatures, Darboux bivector."""
import math

import numpy as np
import pytest

from zbwsim import (Multivector, ScenarioConfig, exp_bivector, gamma,
                    gamma0, geometric_product, reversion, simulate)
from zbwsim.errors import InsufficientDataError, RotorError
from zbwsim.frenet import (Curvatures, FrameSequence, curvatures_from_frame,
                           darboux_bivector, darboux_bivector_series,
                           darboux_invariant, darboux_relation_residual,
                           fd_derivative, frame_from_rotor, internal_field,
                           omega_inner_omega, rebuild_darboux,
                           rotor_frame_sequence, worldline_frame_sequence)
from zbwsim.multivector import G21
from zbwsim.suites import GENERIC_Z0, HELIX_Z0, _z_values

rng = np.random.default_rng(5150)


def run(z, m=1.0, step=1e-3, tau_end=None):
    cfg = ScenarioConfig(m=m, init_kind="z", init_values=_z_values(z),
                         tau_end=tau_end, step=step, normalize_energy=True,
                         name="frenet-test")
    return simulate(cfg)


def rotor_of(tau, m=1.0):
    return exp_bivector(G21 * (-m * tau))


# --- frames -----------------------------------------------------------------

def test_identity_rotor_frame():
    fr = frame_from_rotor(Multivector.scalar(1.0))
    for mu in range(4):
        assert fr.e[mu].allclose(gamma[mu])


def test_frame_requires_rotor():
    with pytest.raises(RotorError):
        frame_from_rotor(Multivector.scalar(2.0))


def test_frame_e1_rotates_at_2m():
    """e1(tau) = e1(0) cos 2m tau + e2(0) sin 2m tau on the rest rotor path."""
    m = 1.0
    for tau in np.linspace(0.0, 3.0, 13):
        fr = frame_from_rotor(rotor_of(tau, m), tau)
        expected_e1 = gamma[1] * math.cos(2 * m * tau) \
            + gamma[2] * math.sin(2 * m * tau)
        expected_e2 = gamma[2] * math.cos(2 * m * tau) \
            - gamma[1] * math.sin(2 * m * tau)
        assert (fr.e[1] - expected_e1).norm() < 1e-12
        assert (fr.e[2] - expected_e2).norm() < 1e-12
        # e0 and e3 are constants of this family
        assert fr.e[0].allclose(gamma0, atol=1e-13)
        assert fr.e[3].allclose(gamma[3], atol=1e-13)


def test_frame_rotation_frequency_zero_crossings():
    taus = np.arange(0.0, 4.0 * math.pi, 1e-3)
    e1_1 = np.array([frame_from_rotor(rotor_of(t)).e[1]["g1"] for t in taus])
    flips = np.where(np.diff(np.signbit(e1_1)))[0]
    crossings = taus[flips] - e1_1[flips] * 1e-3 / (e1_1[flips + 1] - e1_1[flips])
    omega = math.pi / np.mean(np.diff(crossings))
    assert abs(omega - 2.0) / 2.0 < 1e-3


def test_frame_orthonormality_along_rotor_paths():
    traj = run(GENERIC_Z0, tau_end=2.0)
    seq = rotor_frame_sequence(traj)
    assert seq.orthonormality_residual() < 1e-9


# --- Darboux bivector ----------------------------------------------------------

def test_darboux_static_frame_is_zero():
    fr = frame_from_rotor(Multivector.scalar(1.0))
    zero = Multivector(np.zeros(16))
    assert darboux_bivector([zero] * 4, fr).norm() == 0.0


def test_darboux_closed_form_rest_family():
    """Omega = 2 dR/dtau ~R = 2m g1 g2 for R = exp(-g2 g1 m tau)."""
    m, tau = 1.0, 0.6
    R = rotor_of(tau, m)
    fr = frame_from_rotor(R, tau)
    d = 1e-6
    dots = []
    for mu in range(4):
        ep = frame_from_rotor(rotor_of(tau + d, m)).e[mu]
        em = frame_from_rotor(rotor_of(tau - d, m)).e[mu]
        dots.append((ep - em) * (1.0 / (2.0 * d)))
    om = darboux_bivector(dots, fr)
    expected = geometric_product(G21, Multivector.scalar(-2.0 * m))
    # 2 dR ~R with dR = -m g2g1 R: Omega = -2m g2g1 = 2m g1g2
    assert om.allclose(expected, atol=1e-8)
    # and the frequency magnitude is 2m
    assert abs(om.norm() - 2.0 * m) < 1e-8


def test_darboux_matches_2_rdot_rrev_random_path():
    """Omega from the frame equals 2 dR ~R on a generic rotor path."""
    c = rng.normal(scale=0.4, size=6)
    c2 = rng.normal(scale=0.3, size=6)

    def R_of(t):
        coeffs = np.zeros(16)
        coeffs[5:11] = c * t + c2 * t * t
        return exp_bivector(Multivector(coeffs))

    tau, d = 0.7, 1e-6
    R = R_of(tau)
    fr = frame_from_rotor(R, tau)
    dots = []
    for mu in range(4):
        ep = frame_from_rotor(R_of(tau + d)).e[mu]
        em = frame_from_rotor(R_of(tau - d)).e[mu]
        dots.append((ep - em) * (1.0 / (2.0 * d)))
    om = darboux_bivector(dots, fr)
    rdot = (R_of(tau + d) - R_of(tau - d)) * (1.0 / (2.0 * d))
    expected = (rdot * reversion(R) * 2.0).grade(2)
    assert om.allclose(expected, atol=1e-8)


def test_darboux_relation_on_rotor_frames():
    traj = run(GENERIC_Z0, tau_end=2.0)
    seq = rotor_frame_sequence(traj)
    out = darboux_relation_residual(seq)
    assert out["residual"][2:-2].max() < 2e-4
    # halving the step shrinks the residual quadratically: the identity holds
    # for every rotor path, so the residual is pure O(h^2) differencing error
    traj2 = run(GENERIC_Z0, tau_end=2.0, step=5e-4)
    out2 = darboux_relation_residual(rotor_frame_sequence(traj2))
    ratio = out["residual"][2:-2].max() / out2["residual"][2:-2].max()
    assert 2.5 < ratio < 6.0


def test_darboux_relation_static_frame():
    n = 9
    e = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    seq = FrameSequence(np.arange(n) * 0.1, e)
    assert darboux_relation_residual(seq)["max"] == 0.0


def test_darboux_relation_needs_samples():
    e = np.broadcast_to(np.eye(4), (2, 4, 4)).copy()
    with pytest.raises(InsufficientDataError):
        darboux_relation_residual(FrameSequence([0.0, 0.1], e))


# --- curvatures -------------------------------------------------------------------

def test_trivial_worldline_is_straight():
    cfg = ScenarioConfig(m=1.0, init_kind="rotor",
                         init_values={"rho": 1.0, "beta": 0.0,
                                      "bivector": [0.0] * 6},
                         tau_end=2.0, step=1e-3, name="triv")
    traj = simulate(cfg)
    seq = worldline_frame_sequence(traj)
    curv = curvatures_from_frame(seq)
    assert curv.straight
    assert np.abs(curv.K1).max() == 0.0
    assert np.abs(curv.K2).max() == 0.0
    assert np.abs(curv.K3).max() == 0.0
    assert seq.orthonormality_residual() < 1e-9
    assert darboux_relation_residual(seq)["max"] < 1e-10


def test_helix_curvatures_constant():
    traj = run(HELIX_Z0, tau_end=2.0 * math.pi)
    seq = worldline_frame_sequence(traj)
    curv = curvatures_from_frame(seq)
    sl = slice(2, -2)
    assert np.std(curv.K1[sl]) / abs(np.mean(curv.K1[sl])) < 1e-4
    assert np.std(curv.K2[sl]) / abs(np.mean(curv.K2[sl])) < 1e-4
    assert np.abs(curv.K3[sl]).max() < 1e-6 * abs(np.mean(curv.K1[sl]))
    assert curv.K1[sl].mean() > 0.0  # pinned orientation


def test_helix_omega_rebuild_and_invariant():
    traj = run(HELIX_Z0, tau_end=2.0 * math.pi)
    seq = worldline_frame_sequence(traj)
    curv = curvatures_from_frame(seq)
    sl = slice(2, -2)
    om = darboux_bivector_series(seq)
    om_k = rebuild_darboux(curv, seq)
    assert np.abs(om - om_k)[sl].max() < 1e-6
    assert np.abs(darboux_invariant(curv)
                  - omega_inner_omega(om))[sl].max() < 1e-6


def test_rotor_frame_of_rest_family_has_k2_2m():
    cfg = ScenarioConfig(m=1.0, init_kind="rotor",
                         init_values={"rho": 1.0, "beta": 0.0,
                                      "bivector": [0.0] * 6},
                         tau_end=2.0, step=1e-3, name="triv")
    seq = rotor_frame_sequence(simulate(cfg))
    curv = curvatures_from_frame(seq)
    sl = slice(2, -2)
    assert np.abs(curv.K1[sl]).max() < 1e-9
    assert abs(np.mean(curv.K2[sl]) - 2.0) < 1e-5
    # the Frenet rebuild is still consistent for this generalized frame
    om = darboux_bivector_series(seq)
    om_k = rebuild_darboux(curv, seq)
    assert np.abs(om - om_k)[sl].max() < 1e-8


def test_darboux_invariant_formula():
    assert darboux_invariant(3.0, 2.0, 1.0) == 4.0
    zeros = Curvatures(np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3))
    assert np.abs(darboux_invariant(zeros)).max() == 0.0


def test_k_squared_extrinsic():
    curv = Curvatures(np.zeros(2), np.array([3.0, 3.0]), np.zeros(2),
                      np.zeros(2))
    assert np.array_equal(curv.k_squared_extrinsic, [-9.0, -9.0])


# --- internal field -------------------------------------------------------------

def test_internal_field_prefactor_identity():
    traj = run(HELIX_Z0, tau_end=2.0)
    seq = worldline_frame_sequence(traj)
    fint = internal_field(seq, m=1.0, e=1.0)
    om = darboux_bivector_series(seq)
    assert np.abs(fint - om).max() == 0.0


def test_internal_field_static_zero():
    n = 9
    e = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    seq = FrameSequence(np.arange(n) * 0.1, e)
    assert np.abs(internal_field(seq, 1.0, 1.0)).max() == 0.0


def test_internal_field_zero_charge():
    n = 9
    e = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    seq = FrameSequence(np.arange(n) * 0.1, e)
    with pytest.raises(ZeroDivisionError):
        internal_field(seq, 1.0, 0.0)


def test_internal_field_drives_e0():
    """de0 = (e/m) F_int . e0 within the finite-difference band."""
    traj = run(HELIX_Z0, tau_end=2.0)
    seq = worldline_frame_sequence(traj)
    m_, e_ = 1.0, 1.0
    fint = internal_field(seq, m_, e_)
    de = seq.derivatives()
    from zbwsim._backend import gp_batch
    prod = gp_batch(fint, seq.e16(0)) * (e_ / m_)
    resid = np.abs(de[:, 0, :] - prod[:, 1:5])[2:-2].max()
    assert resid < 5e-6


# --- fd helper ------------------------------------------------------------------

def test_fd_derivative_accuracy():
    t = np.linspace(0.0, 1.0, 201)
    y = np.sin(3.0 * t)
    d = fd_derivative(y, t[1] - t[0])
    assert np.abs(d - 3.0 * np.cos(3.0 * t)).max() < 5e-4


def test_fd_derivative_needs_three_samples():
    with pytest.raises(InsufficientDataError):
        fd_derivative(np.array([1.0, 2.0]), 0.1)
