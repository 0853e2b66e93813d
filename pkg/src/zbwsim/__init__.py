"""Spacetime-algebra kernel and zitterbewegung simulator for Cl(1,3).

Layers:
  * `multivector` / `blades` / `matrixrep`: exact Cl(1,3) arithmetic with a
    Dirac-matrix oracle (signature +,-,-,-);
  * `spinors`: Dirac-Hestenes spinors and column-spinor translation;
  * `dynamics`: the classical spinning-particle equations of motion, RK4
    integration and closed-form free solutions;
  * `frenet`: tetrads, curvatures, Darboux bivector;
  * `verify`: residual checks for the field equations and identities;
  * `cli`: `zbwsim simulate | verify | table | frenet`.

Hot kernels run through a compiled extension when available, with a NumPy
fallback selected at import (see `_backend.backend_name`).
"""
from ._backend import backend_name
from .dynamics import (BZState, ConstantField, EMField, FreeField,
                       PolynomialField, ScenarioConfig, Trajectory,
                       analytic_free_velocity, analytic_free_z,
                       conserved_quantities, eom_derivatives, lightlike_helix,
                       mean_velocity, simulate, step_rk4, trivial_solution,
                       zbw_frequency)
from .multivector import (ONE, ZERO, Multivector, exp_bivector, from_matrix,
                          gamma, gamma0, gamma1, gamma2, gamma3, gamma5,
                          geometric_product, grade_projection, inner, inverse,
                          matrix_rep, reversion, wedge)
from .spinors import (DHSpinor, psi_to_z, rotor_decompose, spin_bivector,
                      spin_tensor, velocity_bilinear, z_to_psi)

__version__ = "0.1.0"

__all__ = [
    "Multivector", "ONE", "ZERO", "gamma", "gamma0", "gamma1", "gamma2",
    "gamma3", "gamma5", "geometric_product", "grade_projection", "reversion",
    "inner", "wedge", "exp_bivector", "inverse", "matrix_rep", "from_matrix",
    "DHSpinor", "z_to_psi", "psi_to_z", "rotor_decompose",
    "velocity_bilinear", "spin_bivector", "spin_tensor",
    "BZState", "Trajectory", "ScenarioConfig", "EMField", "FreeField",
    "ConstantField", "PolynomialField", "eom_derivatives", "step_rk4",
    "simulate", "analytic_free_z", "analytic_free_velocity",
    "trivial_solution", "lightlike_helix", "conserved_quantities",
    "mean_velocity", "zbw_frequency", "backend_name", "__version__",
]
