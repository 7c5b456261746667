"""Intrinsic curvature ODE of the profile curve and its first integral.

The geodesic curvature k(u) of the profile curve satisfies

    k'' k = (7/4) (k')^2 + (4c/3) k^2 - 4 k^4,

where c in {0, +1, -1} is the curvature of the surrounding model.  Along any
solution the quantity

    C = ( (k')^2 + (16c/9) k^2 + 16 k^4 ) / k^(7/2)

is conserved; conversely (k')^2 = P(k) = -(16c/9) k^2 - 16 k^4 + C k^(7/2),
so solutions live where P >= 0.  This module integrates the ODE with an
adaptive embedded Runge-Kutta scheme (dense output, event detection) and
exposes C, the admissible k-interval, and the derived quantities kappa2 and
W used by the surface constructions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .defaults import ADMISSIBILITY_SLACK, K_FLOOR, ODE_ATOL, ODE_RTOL
from .errors import DomainError, NoSolutionError, UsageError

__all__ = [
    "ode_rhs",
    "prime_constant",
    "prime_poly",
    "admissible_interval",
    "kappa2",
    "w_value",
    "CurvatureSolution",
    "solve_curvature",
]

# positive equilibrium k = 1/sqrt(3) exists only for c = +1
_EQUILIBRIUM_K = 3.0 ** -0.5

# The conserved constant divides by k^(7/2), which amplifies integration
# error wherever k is small; integrating two orders below the requested
# tolerance keeps the drift contract (100 * rel_tol * |C|) honest.  The
# floor stays above scipy's internal rtol clip.
_TOL_SAFETY = 1e-2
_RTOL_FLOOR = 3e-14


def _internal_tols(rel_tol: float, abs_tol: float) -> tuple[float, float]:
    return max(rel_tol * _TOL_SAFETY, _RTOL_FLOOR), abs_tol * _TOL_SAFETY


def _require_positive_k(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("geodesic curvature k must be positive")
    return k


def ode_rhs(k, kp, c: int):
    """Second derivative k'' = ((7/4) kp^2 + (4c/3) k^2 - 4 k^4) / k."""
    k = _require_positive_k(k)
    kp = np.asarray(kp, dtype=float)
    return (1.75 * kp**2 + (4.0 * c / 3.0) * k**2 - 4.0 * k**4) / k


def prime_constant(k, kp, c: int):
    """Conserved constant C = (kp^2 + (16c/9) k^2 + 16 k^4) / k^(7/2)."""
    k = _require_positive_k(k)
    kp = np.asarray(kp, dtype=float)
    return (kp**2 + (16.0 * c / 9.0) * k**2 + 16.0 * k**4) / k**3.5


def prime_poly(k, C: float, c: int):
    """P(k) = -(16c/9) k^2 - 16 k^4 + C k^(7/2); equals (k')^2 on solutions."""
    k = np.asarray(k, dtype=float)
    return -(16.0 * c / 9.0) * k**2 - 16.0 * k**4 + C * k**3.5


def kappa2(k, C: float):
    """Curvature 3/4 sqrt(|C|) k^(3/4) of the second family of curves."""
    k = _require_positive_k(k)
    if C == 0:
        raise DomainError("kappa2 is undefined for C = 0")
    return 0.75 * np.sqrt(abs(C)) * k**0.75


def w_value(k, kp):
    """Branch discriminant W = (9/16)(kp/k)^2 + 9 k^2 - 1.

    For c = -1 solutions W = (9C/16) k^(3/2), so its sign equals the sign of
    the integration constant and selects circular vs exponential orbits.
    """
    k = _require_positive_k(k)
    kp = np.asarray(kp, dtype=float)
    return 0.5625 * (kp / k) ** 2 + 9.0 * k**2 - 1.0


def _bisect(f, lo: float, hi: float, rel: float = 1e-12) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel * max(abs(lo), abs(hi), 1e-300):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def admissible_interval(C: float, c: int) -> tuple[float, float]:
    """Maximal interval of k > 0 where P(k) >= 0.

    Endpoints are located by bracketing and bisection to 1e-12 relative.
    For c in {0, -1} the polynomial is positive down to k = 0 and the lower
    endpoint is returned as 0.0 (open end).
    """
    # g(k) = P(k)/k^2 has the same positive roots with a cleaner shape
    def g(k):
        return -16.0 * c / 9.0 - 16.0 * k**2 + C * k**1.5

    if c == 1:
        # g rises to a single maximum at k_m then falls; positive region
        # exists only when g(k_m) > 0
        if C <= 0:
            raise NoSolutionError("c = +1 requires a positive constant C")
        k_m = 9.0 * C**2 / 4096.0
        if g(k_m) <= 0:
            raise NoSolutionError(
                "P(k) is nowhere positive: C is below the admissibility threshold"
            )
        k_lo = _bisect(g, 1e-18, k_m)
        hi = 2.0 * k_m
        while g(hi) >= 0:
            hi *= 2.0
        k_hi = _bisect(lambda k: -g(k), k_m, hi)
        return (k_lo, k_hi)

    if c == 0:
        if C <= 0:
            raise NoSolutionError("c = 0 requires a positive constant C")
        return (0.0, (C / 16.0) ** 2)

    # c = -1: g(0+) = 16/9 > 0 and g is eventually negative for either sign
    # of C, so there is a single positive root
    hi = 1.0
    while g(hi) >= 0:
        hi *= 2.0
    k_hi = _bisect(lambda k: -g(k), 1e-18, hi)
    return (0.0, k_hi)


class _TwoSidedDense:
    """Dense evaluator stitched from forward and backward integrations."""

    def __init__(self, right, left, span):
        self._right = right
        self._left = left
        self.span = span

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        uu = np.atleast_1d(u).astype(float)
        lo, hi = self.span
        slack = 1e-9 * max(1.0, abs(lo), abs(hi))
        if np.any(uu < lo - slack) or np.any(uu > hi + slack):
            raise DomainError(
                f"evaluation point outside the solved span [{lo}, {hi}]"
            )
        # after clipping, negative u only occurs when a left branch exists
        uu = np.clip(uu, lo, hi)
        some = self._right if self._right is not None else self._left
        nstate = some.sol(some.t[0]).shape[0]
        out = np.empty((nstate, uu.size))
        flat = uu.ravel()
        neg = flat < 0.0
        if np.any(neg):
            out[:, neg] = self._left.sol(flat[neg])
        if np.any(~neg):
            right = self._right if self._right is not None else self._left
            out[:, ~neg] = right.sol(flat[~neg])
        result = out.T.reshape(uu.shape + (nstate,))
        return result[0] if scalar else result


@dataclass(frozen=True, eq=False)
class CurvatureSolution:
    """Dense-output solution of the curvature ODE with its first integral.

    ``u``, ``k_samples``, ``kp_samples`` hold the accepted integration steps
    (sorted by u).  ``turning_points`` are the detected roots of k'; the
    ``boundary_events`` record any early stop (k floor, admissibility exit,
    or step-size underflow), in which case ``truncated`` is set and ``span``
    is the actually covered interval.
    """

    c: int
    C: float
    k0: float
    kp0: float
    span: tuple[float, float]
    requested_span: tuple[float, float]
    u: np.ndarray
    k_samples: np.ndarray
    kp_samples: np.ndarray
    turning_points: np.ndarray
    boundary_events: list = field(default_factory=list)
    truncated: bool = False
    k_interval: tuple[float, float] = (0.0, np.inf)
    rel_tol: float = ODE_RTOL
    abs_tol: float = ODE_ATOL
    _dense: _TwoSidedDense | None = None

    def state(self, u):
        """(k, k') at arbitrary u inside the solved span, stacked last."""
        return self._dense(u)

    def k(self, u):
        return self.state(u)[..., 0]

    def kp(self, u):
        return self.state(u)[..., 1]

    def drift(self, n: int = 1001) -> float:
        """Max |prime_constant(k, k', c) - C| over a dense sample of the span."""
        lo, hi = self.span
        grid = np.unique(np.concatenate([np.linspace(lo, hi, n), self.u]))
        st = self.state(grid)
        return float(np.max(np.abs(prime_constant(st[..., 0], st[..., 1], self.c) - self.C)))


def _event_functions(C: float, c: int):
    def turning(u, y):
        return y[1]

    turning.terminal = False
    turning.direction = 0.0

    def floor(u, y):
        return y[0] - K_FLOOR

    floor.terminal = True
    floor.direction = -1.0

    def inadmissible(u, y):
        k = max(y[0], K_FLOOR)
        return prime_poly(k, C, c) + ADMISSIBILITY_SLACK * max(1.0, abs(C) * k**3.5)

    inadmissible.terminal = True
    inadmissible.direction = -1.0

    return [turning, floor, inadmissible]


def solve_curvature(
    c: int,
    k0: float,
    kp0: float,
    span: tuple[float, float] = (-1.0, 1.0),
    rel_tol: float = ODE_RTOL,
    abs_tol: float = ODE_ATOL,
) -> CurvatureSolution:
    """Integrate the curvature ODE from (k(0), k'(0)) = (k0, kp0).

    The span must contain u = 0.  Integration runs outward in both
    directions with an order-8 embedded Runge-Kutta pair and dense output,
    stepping below the requested tolerance so the first-integral drift
    stays within 100 * rel_tol * |C| even where k is small.  It stops early
    (recorded as a boundary event, not an error) if k falls to the
    positivity floor or P(k) becomes negative beyond tolerance; the first
    integral is monitored, never projected.
    """
    if k0 <= 0:
        raise DomainError("k0 must be positive")
    u_min, u_max = float(span[0]), float(span[1])
    if not (u_min <= 0.0 <= u_max) or u_min == u_max:
        raise UsageError("span must be a nondegenerate interval containing 0")
    if c == 1 and kp0 == 0.0 and abs(k0 - _EQUILIBRIUM_K) < 1e-12:
        raise UsageError(
            "initial data sits at the constant-curvature equilibrium; "
            "the solution would be constant"
        )

    C = float(prime_constant(k0, kp0, c))

    def rhs(u, y):
        return [y[1], float(ode_rhs(max(y[0], 1e-300), y[1], c))]

    rtol_i, atol_i = _internal_tols(rel_tol, abs_tol)

    def integrate(target):
        return solve_ivp(
            rhs,
            (0.0, target),
            [k0, kp0],
            method="DOP853",
            dense_output=True,
            rtol=rtol_i,
            atol=atol_i,
            events=_event_functions(C, c),
        )

    right = integrate(u_max) if u_max > 0 else None
    left = integrate(u_min) if u_min < 0 else None

    boundary = []
    truncated = False
    reached = [u_min, u_max]
    kinds = ("turning", "k_floor", "inadmissible")
    turning = []
    for side, res in (("left", left), ("right", right)):
        if res is None:
            continue
        turning.extend(res.t_events[0].tolist())
        for idx in (1, 2):
            for ue in res.t_events[idx]:
                boundary.append({"u": float(ue), "kind": kinds[idx]})
                truncated = True
        if res.status == -1:
            boundary.append({"u": float(res.t[-1]), "kind": "step_underflow"})
            truncated = True
        end = float(res.t[-1])
        if side == "left":
            reached[0] = end
        else:
            reached[1] = end

    ts, ys = [], []
    if left is not None:
        ts.append(left.t[::-1])
        ys.append(left.y[:, ::-1])
    if right is not None:
        sl = slice(1, None) if left is not None else slice(None)
        ts.append(right.t[sl])
        ys.append(right.y[:, sl])
    u = np.concatenate(ts)
    y = np.concatenate(ys, axis=1)

    try:
        interval = admissible_interval(C, c)
    except NoSolutionError:
        interval = (k0, k0)

    return CurvatureSolution(
        c=c,
        C=C,
        k0=float(k0),
        kp0=float(kp0),
        span=(reached[0], reached[1]),
        requested_span=(u_min, u_max),
        u=u,
        k_samples=y[0],
        kp_samples=y[1],
        turning_points=np.array(sorted(turning)),
        boundary_events=boundary,
        truncated=truncated,
        k_interval=interval,
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        _dense=_TwoSidedDense(right, left, (reached[0], reached[1])),
    )
