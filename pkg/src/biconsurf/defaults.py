"""Central numeric defaults for the whole library.

Every tolerance, grid size and step factor used by the pipelines lives here
so tests can pin them.  Values are grouped by the stage that consumes them.

Integration
-----------
``ODE_RTOL``/``ODE_ATOL`` are the defaults of :func:`solve_curvature`.  The
pipelines integrate profiles with the tighter ``PIPELINE_RTOL``/``ATOL``:
the verification stage takes finite differences of dense-output data, and
its noise floor is set by the interpolation error of the integrator.

Finite differencing
-------------------
The verifier uses a two-level scheme.  Second derivatives of the immersion
are taken with the small ``inner`` step (central differences of the analytic
first partials, Richardson extrapolated), while derivatives of the mean
curvature field use the larger ``outer`` step: the field is itself the
product of finite differencing, so differencing it again amplifies whatever
noise it carries by 1/step^2, and a larger step keeps that amplification
below the stated tolerances.  Both steps are fractions of the parameter
rectangle diagonal.

Tolerance profiles
------------------
``TOL_PROFILES`` fixes the pass thresholds of the verification report per
surface family.  The closed-form flat-space pipeline is held to 1e-8; the
curved pipelines, whose profile data comes from numerical integration, are
held to 1e-5 (1e-4 for the second-order PDE residual).  The
``normal_bitension_min`` entry is relative: the report demands
min |bitension| > tol * max |bitension| over the grid, since the attainable
absolute floor scales with the field (it decays toward the flat family's
outer radius, for example).
"""
from __future__ import annotations

# ---------------------------------------------------------------- integration
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
PIPELINE_RTOL = 1e-12
PIPELINE_ATOL = 1e-14

# curvature solver guards
K_FLOOR = 1e-8
ADMISSIBILITY_SLACK = 1e-8

# ------------------------------------------------------------------ geometry
DEFAULT_SPAN = (-1.0, 1.0)
DEFAULT_RHO_RANGE = (1.5, 8.0)
DEFAULT_GRID = 64
V_FULL_TURN = (0.0, 6.283185307179586)  # [0, 2*pi]
V_PARABOLIC = (-1.0, 1.0)

# ------------------------------------------------------- finite differencing
FD_INNER_REL = 1e-4
FD_OUTER_REL = {
    "r3_revolution": 1e-3,
    "s3": 3e-3,
    "h3_elliptic": 3e-3,
    "h3_parabolic": 8e-3,
}
FD_OUTER_REL_DEFAULT = 3e-3

# gates used by the verifier
NONCMC_GATE = 1e-6        # |grad f| > gate * (1 + |f|) marks a non-CMC point
EIGEN_DEGENERACY = 1e-7   # |lam1 - lam2| below this skips direction-based checks

# ------------------------------------------------------------------- reports
REPORT_SCHEMA = "biconsurf.verification/1"

TOL_PROFILES = {
    "r3_revolution": {
        "biconservative": 1e-8,
        "gauss_identity": 1e-8,
        "shape_operator_norm": 1e-8,
        "principal_values": 1e-8,
        "x2f": 1e-8,
        "pde": 1e-6,
        "f_vs_reference": 1e-8,
        "K_vs_reference": 1e-8,
        "normal_orthogonality": 1e-10,
        "normal_bitension_min": 1e-3,
    },
    "s3": {
        "biconservative": 1e-5,
        "gauss_identity": 1e-5,
        "shape_operator_norm": 1e-5,
        "principal_values": 1e-5,
        "x2f": 1e-5,
        "pde": 1e-4,
        "f_vs_profile": 1e-5,
        "model_membership": 1e-8,
        "normal_orthogonality": 1e-10,
        "normal_bitension_min": 1e-3,
    },
}
TOL_PROFILES["h3_elliptic"] = dict(TOL_PROFILES["s3"])
TOL_PROFILES["h3_parabolic"] = dict(TOL_PROFILES["s3"])

# profile-curve constraint thresholds
CONSTRAINT_TOL = 1e-6
ORTHOGONALITY_TOL = 1e-8
MEMBERSHIP_TOL = 1e-8
