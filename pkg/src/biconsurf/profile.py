"""Profile curves of the constructed surfaces.

Two constructions live here:

* the closed-form profile of the flat-space surface of revolution, where the
  axial coordinate u is an explicit function of the radius rho with
  u'(rho) = (C rho^(2/3) - 1)^(-1/2);

* frame-integrated unit-speed curves in a totally geodesic 2-sphere or
  hyperbolic plane whose geodesic curvature is a prescribed solution k(u) of
  the curvature ODE and whose position satisfies the linear constraint
  equations of the classification (inner products against the fixed constant
  vectors C1, C2).

The frame system is integrated jointly with (k, k') so the curve and its
curvature share one error budget:

    sigma' = T,   T' = k n - c sigma,   n' = -k T,

with c the model curvature (+1 on the sphere, -1 on the hyperboloid, where
the sign enters through the Gauss formula of the quadric).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .ambient import H3, S3, SpaceForm, orthonormal_complement
from .curvature import (
    CurvatureSolution,
    _internal_tols,
    _TwoSidedDense,
    ode_rhs,
    prime_poly,
)
from .defaults import K_FLOOR
from .errors import (
    ConstructionError,
    DomainError,
    InfeasibleError,
    SplitRangeError,
    UsageError,
)

__all__ = [
    "RevolutionProfile",
    "revolution_profile",
    "Branch",
    "ProfileCurve",
    "reconstruct_profile",
    "profile_oracle_dxdk",
    "oracle_deviation",
]


# ---------------------------------------------------------------------------
# flat space: closed-form profile of the surface of revolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RevolutionProfile:
    """Closed-form axial height u(rho) of the flat-space profile.

    The domain is rho in [C^(-3/2), rho_max]; u is strictly increasing with
    u'(rho) = (C rho^(2/3) - 1)^(-1/2), infinite at the left endpoint where
    the profile meets the waist circle.
    """

    C: float
    rho_max: float

    @property
    def rho_min(self) -> float:
        return self.C ** -1.5

    @property
    def u_range(self) -> tuple[float, float]:
        return (float(self.u_of_rho(self.rho_min)), float(self.u_of_rho(self.rho_max)))

    def _check_rho(self, rho, closed_left=True):
        rho = np.asarray(rho, dtype=float)
        lo = self.rho_min
        slack = 1e-12 * max(1.0, lo)
        low_ok = rho >= lo - slack if closed_left else rho > lo + slack
        if not np.all(low_ok & (rho <= self.rho_max * (1 + 1e-12))):
            raise DomainError(
                f"rho outside the profile domain [{lo}, {self.rho_max}]"
            )
        return np.clip(rho, lo, self.rho_max)

    def u_of_rho(self, rho):
        rho = self._check_rho(rho)
        C = self.C
        root = np.sqrt(np.maximum(C * rho ** (2.0 / 3.0) - 1.0, 0.0))
        return (1.5 / C) * (
            rho ** (1.0 / 3.0) * root
            + np.log(2.0 * (C * rho ** (1.0 / 3.0) + np.sqrt(C) * root)) / np.sqrt(C)
        )

    def du_drho(self, rho):
        rho = self._check_rho(rho, closed_left=False)
        return (self.C * rho ** (2.0 / 3.0) - 1.0) ** -0.5

    def rho_of_u(self, u):
        """Inverse of u(rho), by monotone bisection on the closed form."""
        u = np.asarray(u, dtype=float)
        u_lo, u_hi = self.u_range
        slack = 1e-10 * max(1.0, abs(u_hi))
        if np.any(u < u_lo - slack) or np.any(u > u_hi + slack):
            raise DomainError(f"u outside the invertible range [{u_lo}, {u_hi}]")
        lo = np.full(np.shape(u), self.rho_min)
        hi = np.full(np.shape(u), self.rho_max)
        for _ in range(110):
            mid = 0.5 * (lo + hi)
            below = self.u_of_rho(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def ode_residual(self, u, h: float = 2e-2):
        """|3 rho rho'' - 1 - (rho')^2| along the inverted profile.

        Derivatives of rho(u) come from Richardson-extrapolated central
        differences of the inverse; the inverse carries rounding noise at
        machine-epsilon level, so the step cannot be taken much smaller
        without the second difference amplifying it.  The stencil must stay
        inside the invertible range.
        """
        u = np.asarray(u, dtype=float)
        r0 = self.rho_of_u(u)

        def d1(s):
            return (self.rho_of_u(u + s) - self.rho_of_u(u - s)) / (2 * s)

        def d2(s):
            return (self.rho_of_u(u + s) - 2 * r0 + self.rho_of_u(u - s)) / s**2

        rp = (4 * d1(h / 2) - d1(h)) / 3
        rpp = (4 * d2(h / 2) - d2(h)) / 3
        return np.abs(3.0 * r0 * rpp - 1.0 - rp**2)


def revolution_profile(C: float, rho_max: float) -> RevolutionProfile:
    if C <= 0:
        raise DomainError("the profile constant C must be positive")
    if rho_max <= C ** -1.5:
        raise DomainError("rho_max must exceed the waist radius C^(-3/2)")
    return RevolutionProfile(C=float(C), rho_max=float(rho_max))


# ---------------------------------------------------------------------------
# curved models: frame-integrated profile curves
# ---------------------------------------------------------------------------


class Branch(str, enum.Enum):
    S2 = "s2"
    H2_ELLIPTIC = "h2_elliptic"
    H2_PARABOLIC = "h2_parabolic"


_E = np.eye(4)

# constant vectors of the canonical representative for each branch
_BRANCH_CONSTANTS = {
    Branch.S2: (_E[2], _E[3]),
    Branch.H2_ELLIPTIC: (_E[1], _E[0]),
    Branch.H2_PARABOLIC: (_E[0] + _E[3], _E[1] + _E[3]),
}


def _branch_model(branch: Branch) -> SpaceForm:
    return S3 if branch is Branch.S2 else H3


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Unit-speed curve on the model quadric with prescribed curvature.

    ``state(u)`` returns the 14-component joint state
    (k, k', sigma[4], T[4], n[4]); sigma is the curve, T its velocity and n
    the in-plane unit normal used by the frame equations.
    """

    model: SpaceForm
    branch: Branch
    C: float
    C1: np.ndarray
    C2: np.ndarray
    curvature: CurvatureSolution
    span: tuple[float, float]
    u: np.ndarray
    _dense: _TwoSidedDense

    def state(self, u):
        return self._dense(u)

    def k(self, u):
        return self.state(u)[..., 0]

    def kp(self, u):
        return self.state(u)[..., 1]

    def sigma(self, u):
        return self.state(u)[..., 2:6]

    def velocity(self, u):
        return self.state(u)[..., 6:10]

    def normal(self, u):
        return self.state(u)[..., 10:14]

    def constraint_target(self, k):
        """Required value of <sigma, C1> as a function of k."""
        k = np.asarray(k, dtype=float)
        if self.branch is Branch.H2_PARABOLIC:
            return -2.0 * np.sqrt(2.0) / (3.0 * np.sqrt(-self.C) * k**0.75)
        return 4.0 / (3.0 * np.sqrt(self.C) * k**0.75)

    def constraint_residuals(self, u) -> dict:
        st = self.state(u)
        k, sig, vel = st[..., 0], st[..., 2:6], st[..., 6:10]
        target = self.constraint_target(k)
        inner = self.model.inner
        r1 = inner(sig, self.C1) - target
        if self.branch is Branch.H2_PARABOLIC:
            r2 = inner(sig, self.C2) - target
        else:
            r2 = inner(sig, self.C2)
        return {
            "constraint_c1": r1,
            "constraint_c2": r2,
            "model_membership": inner(sig, sig) - self.model.quadric_target,
            "unit_speed": inner(vel, vel) - 1.0,
        }


def _initial_frame_s2(k0, kp0, C):
    z0 = 4.0 / (3.0 * np.sqrt(C)) * k0**-0.75
    zp0 = -kp0 / (np.sqrt(C) * k0**1.75)
    disc = 1.0 - z0**2
    if disc <= 0:
        raise ConstructionError(
            "infeasible start: 1 - 16/(9C) k0^(-3/2) >= 0 is violated"
        )
    x0 = np.sqrt(disc)
    xp0 = -z0 * zp0 / x0
    yp2 = 1.0 - zp0**2 - xp0**2
    if yp2 < 0:
        raise ConstructionError(
            "infeasible start: the unit-speed condition has no real solution"
        )
    sigma0 = np.array([x0, 0.0, z0, 0.0])
    T0 = np.array([xp0, np.sqrt(yp2), zp0, 0.0])
    return sigma0, T0


def _initial_frame_h2_elliptic(k0, kp0, C):
    w0 = 4.0 / (3.0 * np.sqrt(C)) * k0**-0.75
    wp0 = -kp0 / (np.sqrt(C) * k0**1.75)
    y0 = np.sqrt(1.0 + w0**2)
    yp0 = w0 * wp0 / y0
    xp2 = 1.0 - wp0**2 + yp0**2
    if xp2 < 0:
        raise ConstructionError(
            "infeasible start: the unit-speed condition has no real solution"
        )
    sigma0 = np.array([0.0, w0, 0.0, y0])
    T0 = np.array([0.0, wp0, np.sqrt(xp2), yp0])
    return sigma0, T0


def _initial_frame_h2_parabolic(k0, kp0, C):
    q0 = -2.0 * np.sqrt(2.0) / (3.0 * np.sqrt(-C)) * k0**-0.75
    qp0 = 0.75 * (-q0) * kp0 / k0  # d/du of q along the curvature solution
    disc = 2.0 * q0**2 - 1.0
    if disc < 0:
        raise ConstructionError(
            "infeasible start: 2 <sigma, C1>^2 - 1 >= 0 is violated"
        )
    y0 = -2.0 * q0 + np.sqrt(disc)
    p0 = y0 + q0
    pp0 = -y0 * qp0 / np.sqrt(disc) if disc > 0 else 0.0
    yp0 = pp0 - qp0
    xp2 = 1.0 - 2.0 * pp0**2 + yp0**2
    if xp2 < 0:
        raise ConstructionError(
            "infeasible start: the unit-speed condition has no real solution"
        )
    sigma0 = np.array([p0, p0, 0.0, y0])
    T0 = np.array([pp0, pp0, np.sqrt(xp2), yp0])
    return sigma0, T0


_INITIAL_FRAMES = {
    Branch.S2: _initial_frame_s2,
    Branch.H2_ELLIPTIC: _initial_frame_h2_elliptic,
    Branch.H2_PARABOLIC: _initial_frame_h2_parabolic,
}


def reconstruct_profile(
    sol: CurvatureSolution,
    branch: Branch | str,
    C: float | None = None,
) -> ProfileCurve:
    """Frame-integrate the profile curve matching a curvature solution.

    The initial position and velocity are the canonical representative: the
    constrained coordinates are read off the constraint equations at u = 0,
    the free transverse coordinate starts at zero, and leftover signs are
    fixed positive.  The in-plane normal is oriented so its C1-component
    matches the second derivative of the constraint coordinate; a mismatch
    beyond tolerance is a construction error.
    """
    branch = Branch(branch)
    model = _branch_model(branch)
    if model.c != sol.c:
        raise UsageError(
            f"branch {branch.value} needs a curvature solution with "
            f"c = {model.c}, got c = {sol.c}"
        )
    if C is not None and abs(C - sol.C) > 1e-9 * max(1.0, abs(sol.C)):
        raise UsageError("supplied constant C disagrees with the solution's")
    C = sol.C
    if branch is Branch.H2_PARABOLIC:
        if C >= 0:
            raise UsageError("the exponential branch requires C < 0")
    elif C <= 0:
        raise UsageError(f"branch {branch.value} requires C > 0")
    if np.max(np.abs(sol.kp_samples)) < 1e-14 and abs(sol.kp0) < 1e-14:
        raise UsageError("constant-curvature solution: the surface would be CMC")

    k0, kp0 = sol.k0, sol.kp0
    C1, C2 = _BRANCH_CONSTANTS[branch]
    sigma0, T0 = _INITIAL_FRAMES[branch](k0, kp0, C)

    # in-plane normal: complement of {sigma, T} inside the geodesic 2-plane
    plane_normal = C2 if branch is not Branch.H2_PARABOLIC else C1 - C2
    target0 = float(model.inner(sigma0, C1))
    orient = C1 * np.sign(target0)
    n0 = orthonormal_complement(model.ambient, [sigma0, T0, plane_normal], orient)
    need = 3.0 * k0 * target0
    got = float(model.inner(n0, C1))
    if abs(got - need) > 1e-8 * max(1.0, abs(need)):
        raise ConstructionError(
            "frame normal inconsistent with the constraint second derivative "
            f"({got} vs {need})"
        )

    c = model.c

    def rhs(u, y):
        k, kp = max(y[0], 1e-300), y[1]
        sig, T, n = y[2:6], y[6:10], y[10:14]
        dT = k * n - c * sig
        return np.concatenate(
            [[kp, float(ode_rhs(k, kp, c))], T, dT, -k * T]
        )

    def floor(u, y):
        return y[0] - K_FLOOR

    floor.terminal = True
    floor.direction = -1.0

    y0 = np.concatenate([[k0, kp0], sigma0, T0, n0])
    u_min, u_max = sol.span
    rtol_i, atol_i = _internal_tols(sol.rel_tol, sol.abs_tol)

    def integrate(target):
        return solve_ivp(
            rhs,
            (0.0, target),
            y0,
            method="DOP853",
            dense_output=True,
            rtol=rtol_i,
            atol=atol_i,
            events=[floor],
        )

    right = integrate(u_max) if u_max > 0 else None
    left = integrate(u_min) if u_min < 0 else None
    reached = [
        float(left.t[-1]) if left is not None else 0.0,
        float(right.t[-1]) if right is not None else 0.0,
    ]

    ts = []
    if left is not None:
        ts.append(left.t[::-1])
    if right is not None:
        ts.append(right.t[1:] if left is not None else right.t)
    u = np.concatenate(ts)

    return ProfileCurve(
        model=model,
        branch=branch,
        C=C,
        C1=C1.copy(),
        C2=C2.copy(),
        curvature=sol,
        span=(reached[0], reached[1]),
        u=u,
        _dense=_TwoSidedDense(right, left, (reached[0], reached[1])),
    )


# ---------------------------------------------------------------------------
# independent oracle: first-order ODE in the k parameter (sphere branch)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OracleCurve:
    """x(k) from the reduced first-order ODE, with y recovered by the quadric."""

    C: float
    sign: int
    y_sign: int
    k_range: tuple[float, float]
    _sol: object

    def x(self, k):
        k = np.asarray(k, dtype=float)
        return self._sol.sol(k)[0].reshape(k.shape) if k.ndim else float(self._sol.sol(k)[0])

    def y(self, k):
        k = np.asarray(k, dtype=float)
        x = self.x(k)
        disc = 1.0 - x**2 - 16.0 / (9.0 * self.C) * k**-1.5
        return self.y_sign * np.sqrt(np.maximum(disc, 0.0))


def _dxdk_rhs(C: float, sign: int):
    def rhs(k, x):
        den = 9.0 * C * k**1.5 - 16.0
        rad1 = -9.0 * C * k**1.5 * x[0] ** 2 + 9.0 * C * k**1.5 - 16.0
        rad2 = 9.0 * C * k**1.5 - 144.0 * k**2 - 16.0
        rad1 = max(rad1, 0.0)
        rad2 = max(rad2, 1e-300)
        return [
            12.0 * x[0] / (k * den)
            + sign * 36.0 * np.sqrt(rad1) / (den * np.sqrt(rad2))
        ]

    return rhs


def profile_oracle_dxdk(
    x0: float,
    k_range: tuple[float, float],
    C: float,
    sign: int = 1,
    y_sign: int = 1,
    rel_tol: float = 1e-11,
) -> OracleCurve:
    """Integrate the reduced dx/dk equation on a strictly monotone arc.

    ``k_range`` must avoid both the turning-point locus (where the prime
    integral polynomial vanishes and the square root in the equation blows
    up) and the curve C1-pole where 9 C k^(3/2) = 16.  The result is meant
    purely as an independent cross-check of the frame integration.
    """
    k_a, k_b = float(k_range[0]), float(k_range[1])
    if k_a == k_b:
        raise UsageError("k_range must be nondegenerate")
    lo, hi = min(k_a, k_b), max(k_a, k_b)
    probe = np.linspace(lo, hi, 257)
    den = 9.0 * C * probe**1.5 - 16.0
    if np.any(den <= 0) and np.any(den >= 0):
        raise SplitRangeError("k range crosses the pole 9 C k^(3/2) = 16")
    turn = prime_poly(probe, C, 1)
    if np.any(turn <= 0):
        raise SplitRangeError(
            "k range touches a turning point of the curvature solution; "
            "split the arc at the turning point"
        )
    rad1 = -9.0 * C * probe**1.5 * x0**2 + 9.0 * C * probe**1.5 - 16.0
    if rad1[np.argmin(np.abs(probe - k_a))] < -1e-12:
        raise InfeasibleError("initial point violates the quadric inequality")

    res = solve_ivp(
        _dxdk_rhs(C, sign),
        (k_a, k_b),
        [float(x0)],
        method="DOP853",
        dense_output=True,
        rtol=rel_tol,
        atol=1e-13,
    )
    if not res.success:
        raise InfeasibleError(f"oracle integration failed: {res.message}")
    return OracleCurve(C=C, sign=sign, y_sign=y_sign, k_range=(k_a, k_b), _sol=res)


def oracle_deviation(
    prof: ProfileCurve,
    u_start: float,
    u_end: float,
    n: int = 200,
) -> dict:
    """Max deviation between the frame curve and the k-parameter oracle.

    Valid only on the sphere branch and on arcs where k is strictly
    monotone.  The equation's sign ambiguity is resolved by matching the
    frame's dx/dk at the start of the arc, and the y branch by the frame's
    y sign there; both are degenerate exactly where y = 0, so pick an arc
    start away from that locus.
    """
    if prof.branch is not Branch.S2:
        raise UsageError("the k-parameter oracle applies to the sphere branch")
    u = np.linspace(u_start, u_end, n)
    st = prof.state(u)
    k, kp = st[..., 0], st[..., 1]
    if np.any(kp == 0) or np.max(kp) * np.min(kp) < 0:
        raise SplitRangeError("arc is not strictly monotone in k")
    x_fr, y_fr = st[..., 2], st[..., 3]

    k0, kp0 = float(k[0]), float(kp[0])
    x0 = float(x_fr[0])
    slope = float(st[0, 6]) / kp0  # dx/dk from the frame at the arc start
    cands = {s: _dxdk_rhs(prof.C, s)(k0, [x0])[0] for s in (1, -1)}
    sign = min(cands, key=lambda s: abs(cands[s] - slope))
    y_sign = 1 if y_fr[0] >= 0 else -1

    oracle = profile_oracle_dxdk(x0, (k0, float(k[-1])), prof.C, sign, y_sign)
    return {
        "x": float(np.max(np.abs(oracle.x(k) - x_fr))),
        "y": float(np.max(np.abs(oracle.y(k) - y_fr))),
        "sign": sign,
    }
