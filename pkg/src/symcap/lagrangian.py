"""Lagrangian products K x_L T and the l_p-sums of two Lagrangian discs.

The cube-times-body product B^n_inf x_L A is symplectomorphic to the toric
domain over 4|A|, so its capacity comes from the convex toric formula. The
4-dimensional domain X_p = {(x, y) in R^2 x R^2 : |x|^p + |y|^p <= 1} is
symplectomorphic to the toric domain over a region Ω_p bounded by the axes and
an explicit curve; that curve is sampled here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bodies as B
from .bodies import INF
from .numerics import QuadratureSpec, gamma, integrate
from .oracles import shoelace_area
from .records import CapacityReport, VerificationRecord
from .toric import Graph2D, OrthantOfBody, RegionError, Scale, capacity_convex_toric, support_norm

DEFAULT_CURVE_POINTS = 2001


@dataclass(frozen=True)
class LagrangianProduct:
    """{(x, y) : x in x_body, y in y_body} in R^2n."""

    x_body: B.Body
    y_body: B.Body

    def __post_init__(self):
        if self.x_body.dim != self.y_body.dim:
            raise ValueError("both factors of a Lagrangian product need the same dimension")

    @property
    def n(self) -> int:
        return self.x_body.dim

    def volume(self) -> float:
        return B.volume(self.x_body) * B.volume(self.y_body)

    def contains(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=float))
        n = self.n
        return (B.gauge(self.x_body, z[:, :n]) <= 1) & (B.gauge(self.y_body, z[:, n:]) <= 1)


def _require_unconditional(body: B.Body) -> None:
    if not B.is_coordinate_unconditional(body):
        raise ValueError("body must be coordinate-unconditional")


def capacity_cube_product(body: B.Body) -> CapacityReport:
    """Capacity of B^n_inf x_L A for a coordinate-unconditional convex body A.

    Equal to 4 min_i ||e_i||*_{|A|}; cross-checked against the convex toric
    formula applied to 4|A|.
    """
    _require_unconditional(body)
    region = OrthantOfBody(body)
    norms = [support_norm(region, e) for e in np.eye(body.dim)]
    value = 4.0 * min(norms)
    toric = capacity_convex_toric(Scale(4.0, region)).value
    check = VerificationRecord.equality("cube-product/toric-route", value, toric,
                                        1e-9 * max(1.0, value))
    return CapacityReport(value, "cube x_L balanced body: 4 min_i ||e_i||*_{|A|}",
                          {"coordinate_maxima": norms, "toric_route": toric}, [check])


def selfpolar_capacity_bound(body: B.Body, tol: float = 1e-9) -> VerificationRecord:
    """Upper bound 4 r min_i ||e_i||*_{|A°|} for c(A x_L A°), with its proof chain.

    r = max_i ||e_i||*_{|A|}. Checks ||e_j||*_{|A°|} <= 1/||e_j||*_{|A|} for every j
    and bound <= 4.
    """
    _require_unconditional(body)
    n = body.dim
    eye = np.eye(n)
    primal = [support_norm(OrthantOfBody(body), e) for e in eye]
    dual = [support_norm(OrthantOfBody(B.polar(body)), e) for e in eye]
    r = max(primal)
    bound = 4.0 * r * min(dual)
    chain = [1.0 / h - d for h, d in zip(primal, dual)]
    slack = min(min(chain), 4.0 - bound)
    q = {"r": r, "bound": bound, "n": n}
    q.update({f"primal_{j}": h for j, h in enumerate(primal)})
    q.update({f"dual_{j}": d for j, d in enumerate(dual)})
    q.update({f"chain_slack_{j}": s for j, s in enumerate(chain)})
    return VerificationRecord("selfpolar/capacity-bound", slack, tol, q)


def selfpolar_viterbo_check(body: B.Body, tol: float = 1e-9) -> VerificationRecord:
    """Volume-capacity inequality for A x_L A°.

    Checks 4^n <= n! Vol(A) Vol(A°) and c^n <= n! Vol with c bounded by the
    self-polar capacity bound.
    """
    cap = selfpolar_capacity_bound(body, tol)
    n = body.dim
    scaled_volume = math.factorial(n) * B.mahler(body)
    mahler_slack = scaled_volume - 4.0 ** n
    viterbo_slack = scaled_volume - cap.quantities["bound"] ** n
    slack = min(mahler_slack, viterbo_slack, cap.slack)
    return VerificationRecord("selfpolar/viterbo", slack, tol,
                              {"n": n, "n_factorial_mahler": scaled_volume,
                               "four_pow_n": 4.0 ** n, "capacity_bound": cap.quantities["bound"],
                               "mahler_slack": mahler_slack, "viterbo_slack": viterbo_slack,
                               "capacity_chain_slack": cap.slack})


def selfpolar_capacity_lp(n: int, p: float) -> CapacityReport:
    """c(B^n_p x_L (B^n_p)°) = 4 for every p in [1, inf].

    The upper bound is recomputed from the self-polar chain; the lower bound 4
    is the known Gromov-width estimate, recomputed through the cube product when
    p is 1 or inf.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ball = B.LpBall(n, p)
    upper = selfpolar_capacity_bound(ball)
    q = {"upper_bound": upper.quantities["bound"], "lower_bound": 4.0}
    checks = [upper]
    if p in (1, INF):
        # B_1 x_L B_inf is carried to B_inf x_L B_1 by (x, y) -> (-y, x)
        cube = capacity_cube_product(B.LpBall(n, 1))
        q["cube_product"] = cube.value
        checks.append(VerificationRecord.equality("selfpolar-lp/cube-product", cube.value, 4.0, 1e-10))
    return CapacityReport(4.0, "l_p ball x_L its polar: 4 (upper and lower bound meet)", q, checks)


# --------------------------------------------------------------------------- X_p


@dataclass(frozen=True)
class XpDomain:
    """l_p-sum of two Lagrangian unit discs in R^2 x R^2."""

    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    def contains(self, z) -> np.ndarray:
        return xp_membership(self.p, z)

    def bbox(self):
        return (-np.ones(4), np.ones(4))

    def volume(self) -> float:
        """Closed form 4π^2 Γ(2/p)^2 / (p^2 Γ(1 + 4/p))."""
        if self.p == INF:
            return math.pi ** 2
        p = self.p
        return 4 * math.pi ** 2 * gamma(2 / p) ** 2 / (p * p * gamma(1 + 4 / p))


def xp_membership(p: float, z):
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    pts = np.atleast_2d(z)
    if pts.shape[1] != 4:
        raise ValueError("X_p lives in R^4")
    rx = np.hypot(pts[:, 0], pts[:, 1])
    ry = np.hypot(pts[:, 2], pts[:, 3])
    if p == INF:
        inside = np.maximum(rx, ry) <= 1.0
    else:
        inside = rx ** p + ry ** p <= 1.0
    return bool(inside[0]) if single else inside


def xp_capacity(p: float) -> CapacityReport:
    """Normalized capacity of X_p (every normalized capacity agrees)."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p == INF:
        return CapacityReport(4.0, "X_inf: 4", {"branch": "inf"})
    first = 2 * math.pi * 0.25 ** (1 / p) if p <= 2 else None
    second = 4 * gamma(1 + 1 / p) ** 2 / gamma(1 + 2 / p) if p >= 2 else None
    if p < 2:
        return CapacityReport(first, "X_p, p in [1,2]: 2π (1/4)^(1/p)", {"branch": "convex"})
    if p > 2:
        return CapacityReport(second, "X_p, p in [2,inf): 4 Γ(1+1/p)^2 / Γ(1+2/p)",
                              {"branch": "concave"})
    check = VerificationRecord.equality("xp-capacity/p2-branches", first, second, 1e-12)
    return CapacityReport(first, "X_2: both branches", {"branch": "both", "convex_branch": first,
                                                         "concave_branch": second}, [check])


def _vmax(p: float) -> float:
    return 1.0 if p == INF else 0.25 ** (1.0 / p)


@lru_cache(maxsize=1 << 16)
def xp_gp(p: float, v: float) -> float:
    """The profile function g_p(v) for v in [0, (1/4)^(1/p)].

    2 ∫ sqrt((1 - r^p)^(2/p) - v^2/r^2) dr between r∓ = (1/2 ∓ sqrt(1/4 - v^p))^(1/p),
    which are exactly the roots of the radicand. The substitution
    r = mid - half cos θ cancels the square-root behaviour at both ends.
    """
    if p == INF or not p >= 1:
        raise ValueError(f"g_p needs finite p >= 1, got {p}")
    vmax = _vmax(p)
    if v < 0 or v > vmax * (1 + 1e-14):
        raise ValueError(f"v = {v} outside [0, {vmax}]")
    disc = 0.25 - v ** p
    if disc <= 0:
        return 0.0
    s = math.sqrt(disc)
    # 1/2 - s without cancellation when v^p is tiny
    lo = (v ** p / (0.5 + s)) ** (1.0 / p)
    hi = (0.5 + s) ** (1.0 / p)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def radicand(r):
        base = (1.0 - r ** p) ** (2.0 / p)
        return base if v == 0 else base - (v / r) ** 2

    def integrand(theta):
        r = mid - half * math.cos(theta)
        q = radicand(r)
        if q < 0:
            if q < -1e-12:
                raise ValueError(f"negative radicand {q} at r = {r}")
            q = 0.0
        return math.sqrt(q) * half * math.sin(theta)

    return 2.0 * integrate(integrand, 0.0, math.pi, QuadratureSpec(abs_tol=1e-12))


def xp_curve(p: float, v: float) -> tuple[float, float]:
    """Point of the boundary curve of Ω_p at parameter v in [-v_max, v_max]."""
    vmax = _vmax(p)
    if abs(v) > vmax * (1 + 1e-14):
        raise ValueError(f"v = {v} outside [-{vmax}, {vmax}]")
    v = max(-vmax, min(vmax, v))
    if p == INF:
        root = math.sqrt(max(0.0, 1.0 - v * v))
        ac = math.acos(v)
        return 2 * (root + v * (math.pi - ac)), 2 * (root - v * ac)
    if v >= 0:
        g = xp_gp(p, v)
        return 2 * math.pi * v + g, g
    g = xp_gp(p, -v)
    return g, -2 * math.pi * v + g


def xp_curve_points(p: float, points: int = DEFAULT_CURVE_POINTS) -> np.ndarray:
    """Samples (v, w1, w2) of the curve, cosine-spaced in v so both ends are resolved.

    An odd ``points`` puts the diagonal point v = 0 on the grid.
    """
    if points < 3:
        raise ValueError("need at least three curve points")
    vmax = _vmax(p)
    v = -vmax * np.cos(np.pi * np.arange(points) / (points - 1))
    v[0], v[-1] = -vmax, vmax
    if points % 2:
        v[points // 2] = 0.0
    if p == INF:
        root = np.sqrt(np.clip(1 - v * v, 0, None))
        ac = np.arccos(np.clip(v, -1, 1))
        w = np.stack([2 * (root + v * (np.pi - ac)), 2 * (root - v * ac)], axis=1)
    else:
        w = np.array([xp_curve(p, float(t)) for t in v])
    return np.column_stack([v, w])


def _omega_polygon(p: float, points: int) -> np.ndarray:
    curve = xp_curve_points(p, points)[:, 1:]
    return np.vstack([[0.0, 0.0], curve])


def omega_p_region(p: float, curve_points: int = DEFAULT_CURVE_POINTS) -> Graph2D:
    """Ω_p as a tabulated graph region over [0, 2π v_max]."""
    curve = xp_curve_points(p, curve_points)[:, 1:]
    x, y = curve[:, 0].copy(), curve[:, 1].copy()
    x[0] = 0.0
    y[-1] = 0.0
    if np.any(np.diff(x) <= 0):
        raise RegionError(f"curve for p = {p} is not a graph over the first axis")
    return Graph2D.from_table(x, y, origin={"type": "xp_region", "p": p, "curve_points": curve_points})


def omega_p_area(p: float, curve_points: int = DEFAULT_CURVE_POINTS) -> float:
    """Shoelace area of the polygon (origin, sampled curve); raises if it self-intersects."""
    if curve_points < 100:
        raise ValueError("use at least 100 curve points")
    return shoelace_area(_omega_polygon(p, curve_points))
