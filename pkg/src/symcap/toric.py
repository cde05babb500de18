"""Moment regions of toric domains and their capacities.

A toric domain X_Ω is the preimage of a region Ω in the closed positive orthant
under (z_1..z_n) -> (π|z_1|^2, ..., π|z_n|^2). Its symplectic volume equals the
Lebesgue area of Ω, and its normalized capacities are read off from two
functionals of Ω:

* the support norm ``||v||*`` = sup over Ω of <v, w>, and
* ``[v]`` = min of <v, w> over the closure of the boundary part of Ω lying in the
  open orthant.

For convex Ω every normalized capacity equals min_i ||e_i||*. For concave Ω the
Gromov width is max over positive integer v with sum n of [v], which is [(1..1)],
and min_i ||e_i||* is an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from . import bodies as B
from .numerics import QuadratureSpec, RngStream, integrate
from .records import CapacityReport, VerificationRecord

GRAPH_SAMPLES = 4096
BOUNDARY_SAMPLES = 10_000
REFINE_CANDIDATES = 10
MIDPOINT_CHECKS = 10_000


class RegionError(ValueError):
    """A region fails a construction invariant or an operation's precondition."""


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""


# --------------------------------------------------------------------------- regions


@dataclass(frozen=True)
class Box:
    upper: tuple[float, ...]

    def __post_init__(self):
        up = tuple(float(u) for u in self.upper)
        if not up or not all(u > 0 and math.isfinite(u) for u in up):
            raise RegionError(f"box needs positive finite sides, got {self.upper}")
        object.__setattr__(self, "upper", up)

    @property
    def dim(self) -> int:
        return len(self.upper)


@dataclass(frozen=True)
class Simplex:
    """{w >= 0 : w_1 + ... + w_n <= level}; the moment region of the ball of capacity level."""

    level: float
    dim: int

    def __post_init__(self):
        if not self.level > 0 or not math.isfinite(self.level):
            raise RegionError(f"simplex level must be positive, got {self.level}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise RegionError(f"simplex dimension must be a positive integer, got {self.dim}")


@dataclass(frozen=True)
class OrthantOfBody:
    """|A| = A ∩ R^n_{>=0} for a coordinate-unconditional body A."""

    body: B.Body

    def __post_init__(self):
        if not B.is_coordinate_unconditional(self.body):
            raise RegionError("orthant regions need a coordinate-unconditional body")

    @property
    def dim(self) -> int:
        return self.body.dim


@dataclass(frozen=True, eq=False)
class Graph2D:
    """{(x1, x2) : 0 <= x1 <= a, 0 <= x2 <= f(x1)} with f >= 0 nonincreasing.

    ``f`` must accept numpy arrays. Use :meth:`from_table` for sampled data
    (linear interpolation between nodes).
    """

    a: float
    f: Callable[[np.ndarray], np.ndarray]
    samples: int = GRAPH_SAMPLES
    table: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    expr: str | None = None
    origin: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.a > 0 or not math.isfinite(self.a):
            raise RegionError(f"graph region needs a > 0, got {self.a}")
        x, y = self.nodes()
        if not np.all(np.isfinite(y)):
            raise RegionError("graph function is not finite on [0, a]")
        scale = max(1.0, float(np.max(np.abs(y))))
        if np.any(y < -1e-12 * scale):
            raise RegionError("graph function must be nonnegative")
        if not np.max(y) > 0:
            raise RegionError("graph region has empty interior")
        if np.any(np.diff(y) > 1e-9 * scale):
            k = int(np.argmax(np.diff(y)))
            raise RegionError(f"graph function increases near x = {x[k]:.6g}; "
                              "the region would not be balanced")

    @classmethod
    def from_table(cls, x, y, origin: dict | None = None) -> "Graph2D":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise RegionError("table needs matching 1D x and y arrays")
        if x[0] != 0 or np.any(np.diff(x) <= 0):
            raise RegionError("table x must start at 0 and increase strictly")
        x.setflags(write=False)
        y.setflags(write=False)
        return cls(float(x[-1]), lambda t: np.interp(t, x, y), samples=x.size,
                   table=(x, y), origin=origin)

    @property
    def dim(self) -> int:
        return 2

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        if self.table is not None:
            return self.table
        x = np.linspace(0.0, self.a, self.samples)
        return x, self.eval(x)

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(self.f(x), dtype=float)
            if y.shape != x.shape:
                y = np.broadcast_to(y, x.shape).astype(float)
        except (TypeError, ValueError):
            y = np.vectorize(lambda t: float(self.f(t)))(x)
        return y


@dataclass(frozen=True)
class Product:
    left: "Region"
    right: "Region"

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim


@dataclass(frozen=True)
class Scale:
    r: float
    region: "Region"

    def __post_init__(self):
        if not self.r > 0 or not math.isfinite(self.r):
            raise RegionError(f"scale factor must be positive, got {self.r}")

    @property
    def dim(self) -> int:
        return self.region.dim


Region = Union[Box, Simplex, OrthantOfBody, Graph2D, Product, Scale]


def product(*regions: Region) -> Region:
    out = regions[0]
    for r in regions[1:]:
        out = Product(out, r)
    return out


# --------------------------------------------------------------------------- membership


def region_contains(region: Region, w, slack: float = 0.0):
    """Membership in the closure of Ω; ``w`` has shape (n,) or (N, n)."""
    arr = np.asarray(w, dtype=float)
    single = arr.ndim == 1
    pts = arr[None, :] if single else arr
    if pts.shape[1] != region.dim:
        raise RegionError(f"point dimension {pts.shape[1]} does not match region dimension {region.dim}")
    out = _contains(region, pts, slack)
    return bool(out[0]) if single else out


def _contains(region: Region, w: np.ndarray, slack: float) -> np.ndarray:
    nonneg = np.all(w >= -slack, axis=1)
    if isinstance(region, Box):
        return nonneg & np.all(w <= np.asarray(region.upper) * (1 + slack), axis=1)
    if isinstance(region, Simplex):
        return nonneg & (w.sum(axis=1) <= region.level * (1 + slack))
    if isinstance(region, OrthantOfBody):
        return nonneg & (B.gauge(region.body, w) <= 1.0 + slack)
    if isinstance(region, Graph2D):
        x1 = w[:, 0]
        inside = nonneg & (x1 <= region.a * (1 + slack))
        y = region.eval(np.clip(x1, 0.0, region.a))
        scale = max(1.0, region.a)
        return inside & (w[:, 1] <= y + slack * scale)
    if isinstance(region, Product):
        k = region.left.dim
        return _contains(region.left, w[:, :k], slack) & _contains(region.right, w[:, k:], slack)
    if isinstance(region, Scale):
        return _contains(region.region, w / region.r, slack)
    raise TypeError(f"not a region: {region!r}")


def symmetrized_contains(region: Region, x) -> np.ndarray:
    """Membership in the symmetrisation {x : (|x_1|, ..., |x_n|) in Ω}."""
    return region_contains(region, np.abs(np.asarray(x, dtype=float)))


# --------------------------------------------------------------------------- 1D search


def _graph_extremum(g: Graph2D, c1: float, c2: float, sense: str) -> tuple[float, float]:
    """Extremum of c1 x + c2 f(x) over [0, a]; returns (value, argmin/argmax).

    Tables are piecewise linear, so the nodes are exact. Closed-form graphs are
    sampled densely and the best candidates refined by bounded Brent search.
    """
    sign = 1.0 if sense == "min" else -1.0
    x, y = g.nodes()
    vals = sign * (c1 * x + c2 * y)
    if g.table is not None:
        k = int(np.argmin(vals))
        return sign * float(vals[k]), float(x[k])
    best_k = np.argsort(vals)[:REFINE_CANDIDATES]
    best_v, best_x = float(vals[best_k[0]]), float(x[best_k[0]])

    def obj(t):
        return sign * (c1 * t + c2 * float(g.eval(np.array([t]))[0]))

    for k in best_k:
        lo, hi = x[max(k - 1, 0)], x[min(k + 1, x.size - 1)]
        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13 * max(1.0, g.a)})
        if res.fun < best_v:
            best_v, best_x = float(res.fun), float(res.x)
    return sign * best_v, best_x


# --------------------------------------------------------------------------- functionals


def _check_v(region: Region, v, strict: bool) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (region.dim,):
        raise RegionError(f"vector of shape {v.shape} does not match region dimension {region.dim}")
    if strict and not np.all(v > 0):
        raise RegionError("vector must be componentwise positive")
    if not np.all(v >= 0):
        raise RegionError("vector must be componentwise nonnegative")
    return v


def support_norm(region: Region, v) -> float:
    """||v||*_Ω = sup{<v, w> : w in Ω} for v >= 0."""
    v = _check_v(region, v, strict=False)
    return _support(region, v)


def _support(region: Region, v: np.ndarray) -> float:
    if isinstance(region, Box):
        return float(np.dot(v, region.upper))
    if isinstance(region, Simplex):
        return region.level * float(np.max(v))
    if isinstance(region, OrthantOfBody):
        # for unconditional A the max over A of <v, x>, v >= 0, sits in the orthant
        return float(B.support(region.body, v))
    if isinstance(region, Graph2D):
        return _graph_extremum(region, v[0], v[1], "max")[0]
    if isinstance(region, Product):
        k = region.left.dim
        return _support(region.left, v[:k]) + _support(region.right, v[k:])
    if isinstance(region, Scale):
        return region.r * _support(region.region, v)
    raise TypeError(f"not a region: {region!r}")


def radial_extent(region: Region, directions: np.ndarray, iters: int = 64) -> np.ndarray:
    """sup{t : t d in Ω} for each row d of ``directions`` (vectorised bisection).

    Uses membership only; valid for star-shaped Ω, which covers every convex or
    concave toric region.
    """
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    lo = np.zeros(len(d))
    hi = np.ones(len(d))
    for _ in range(200):
        grow = _contains(region, hi[:, None] * d, 0.0)
        if not np.any(grow):
            break
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, 2 * hi, hi)
    else:
        raise RegionError("region looks unbounded")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = _contains(region, mid[:, None] * d, 0.0)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return lo


def _radial_min_2d(region: Region, v: np.ndarray, samples: int = BOUNDARY_SAMPLES) -> float:
    theta = np.linspace(0.0, 0.5 * math.pi, samples)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    vals = radial_extent(region, dirs) * (dirs @ v)
    order = np.argsort(vals)[:REFINE_CANDIDATES]
    best = float(vals[order[0]])

    def obj(t):
        d = np.array([[math.cos(t), math.sin(t)]])
        return float(radial_extent(region, d)[0] * (d[0] @ v))

    for k in order:
        lo, hi = theta[max(k - 1, 0)], theta[min(k + 1, samples - 1)]
        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return best


def _radial_min_nd(region: Region, v: np.ndarray, samples: int = BOUNDARY_SAMPLES,
                   seed: int = 0) -> float:
    gen = RngStream(seed, 7).generator()
    dirs = np.abs(gen.standard_normal((samples, region.dim)))
    dirs = np.vstack([np.eye(region.dim), np.ones((1, region.dim)), dirs])
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return float(np.min(radial_extent(region, dirs) * (dirs @ v)))


def boundary_min(region: Region, v) -> float:
    """Direct minimisation of <v, w> over the radial boundary of Ω (membership only)."""
    v = _check_v(region, v, strict=True)
    if region.dim == 1:
        return float(v[0] * radial_extent(region, np.ones((1, 1)))[0])
    if region.dim == 2:
        return _radial_min_2d(region, v)
    return _radial_min_nd(region, v)


def min_inner(region: Region, v) -> float:
    """[v]_Ω: minimum of <v, w> over the closure of ∂Ω ∩ R^n_{>0}, for concave Ω."""
    v = _check_v(region, v, strict=True)
    if not classify(region).concave:
        raise RegionError("min_inner needs a concave region")
    return _min_inner(region, v)


def _min_inner(region: Region, v: np.ndarray) -> float:
    if isinstance(region, Simplex):
        return region.level * float(np.min(v))
    if isinstance(region, Scale):
        return region.r * _min_inner(region.region, v)
    if isinstance(region, Graph2D):
        return _graph_extremum(region, v[0], v[1], "min")[0]
    return boundary_min(region, v)


# --------------------------------------------------------------------------- classification


@dataclass
class ToricClassification:
    kind: str  # "Convex", "Concave" or "Neither"
    convex: bool
    concave: bool
    certified: bool
    witnesses: list = field(default_factory=list)


def _kind(convex: bool, concave: bool) -> str:
    return "Convex" if convex else "Concave" if concave else "Neither"


def _graph_shape(g: Graph2D) -> tuple[bool, bool, list]:
    x, y = g.nodes()
    scale = max(1.0, float(np.max(y)))
    tol = 1e-9 * scale
    # deviation of each interior node from the chord of its neighbours
    lam = (x[2:] - x[1:-1]) / (x[2:] - x[:-2])
    dev = y[1:-1] - (lam * y[:-2] + (1 - lam) * y[2:])
    nonincreasing = bool(np.all(np.diff(y) <= tol))
    concave_f = bool(np.all(dev >= -tol))
    convex_f = bool(np.all(dev <= tol))
    witnesses = []
    if not concave_f:
        k = int(np.argmin(dev))
        witnesses.append(("f not concave near", float(x[k + 1])))
    if not convex_f:
        k = int(np.argmax(dev))
        witnesses.append(("f not convex near", float(x[k + 1])))
    vanishes = abs(float(y[-1])) <= tol
    if not vanishes:
        witnesses.append(("f(a) != 0", float(y[-1])))
    return nonincreasing and concave_f, convex_f and vanishes, witnesses


def _region_extent(region: Region) -> np.ndarray:
    return np.array([_support(region, e) for e in np.eye(region.dim)])


def sampled_convexity(region: Region, checks: int = MIDPOINT_CHECKS, seed: int = 1) -> list:
    """Midpoint test on the symmetrisation; returns violating midpoints (empty if none found)."""
    ext = _region_extent(region)
    gen = RngStream(seed, 11).generator()
    pts = []
    while sum(len(p) for p in pts) < 2 * checks:
        x = (2 * gen.random((4 * checks, region.dim)) - 1) * ext
        pts.append(x[symmetrized_contains(region, x)])
    x = np.concatenate(pts)[: 2 * checks]
    mid = 0.5 * (x[:checks] + x[checks:])
    bad = ~symmetrized_contains(region, mid / (1 + 1e-9))
    return [tuple(m) for m in mid[bad][:5]]


def sampled_concavity(region: Region, checks: int = MIDPOINT_CHECKS, seed: int = 2) -> list:
    """Midpoint test on the complement of Ω inside a box around it."""
    ext = _region_extent(region)
    gen = RngStream(seed, 13).generator()
    pts = []
    total = 0
    for _ in range(100):
        w = 1.5 * ext * gen.random((4 * checks, region.dim))
        keep = w[~_contains(region, w, 0.0)]
        pts.append(keep)
        total += len(keep)
        if total >= 2 * checks:
            break
    w = np.concatenate(pts)[: 2 * checks]
    half = len(w) // 2
    mid = 0.5 * (w[:half] + w[half:2 * half])
    bad = _contains(region, mid * (1 + 1e-7), 0.0)
    return [tuple(m) for m in mid[bad][:5]]


def classify(region: Region) -> ToricClassification:
    """Convex / concave test for the toric domain of ``region``.

    Boxes, simplices, body orthants, products and scalings are classified
    structurally; graph regions by exact tests on the samples of f. Concavity of
    body orthants and products falls back to a randomised midpoint test and is
    then reported as not certified.
    """
    if isinstance(region, Box):
        return ToricClassification("Convex", True, False, True)
    if isinstance(region, Simplex):
        return ToricClassification("Convex", True, True, True)
    if isinstance(region, Graph2D):
        convex, concave, wit = _graph_shape(region)
        return ToricClassification(_kind(convex, concave), convex, concave, True, wit)
    if isinstance(region, Scale):
        return classify(region.region)
    if isinstance(region, OrthantOfBody):
        wit = sampled_concavity(region)
        return ToricClassification("Convex", True, not wit, False, wit)
    if isinstance(region, Product):
        convex = classify(region.left).convex and classify(region.right).convex
        wit = sampled_concavity(region)
        return ToricClassification(_kind(convex, not wit), convex, not wit, False, wit)
    raise TypeError(f"not a region: {region!r}")


# --------------------------------------------------------------------------- capacities


def lattice_vectors(n: int, total: int, positive: bool) -> list[tuple[int, ...]]:
    """All v in Z^n with entries >= 0 (or >= 1) summing to ``total``, lexicographic."""
    low = 1 if positive else 0
    rest = total - low * n
    if rest < 0:
        return []
    out = []
    # stars and bars over the excess above the lower bound
    for bars in combinations(range(rest + n - 1), n - 1):
        prev, parts = -1, []
        for b in bars + (rest + n - 1,):
            parts.append(b - prev - 1 + low)
            prev = b
        out.append(tuple(parts))
    return sorted(out, reverse=True)


def _require_convex(region: Region) -> None:
    cls = classify(region)
    if not cls.convex:
        raise RegionError(f"region is not convex ({cls.kind}); witnesses: {cls.witnesses}")


def capacity_convex_toric(region: Region) -> CapacityReport:
    """Common value of all normalized capacities of a convex toric domain."""
    _require_convex(region)
    n = region.dim
    index = lattice_vectors(n, 1, positive=False)
    norms = [support_norm(region, v) for v in index]
    basis = sorted(tuple(int(t) for t in e) for e in np.eye(n, dtype=int))
    check = VerificationRecord.boolean("convex-toric/index-set-is-basis", sorted(index) == basis)
    return CapacityReport(
        value=min(norms),
        provenance="convex toric domain: min_i ||e_i||*",
        quantities={"index_set": index, "support_norms": norms},
        checks=[check],
    )


def _require_concave(region: Region) -> None:
    cls = classify(region)
    if not cls.concave:
        raise RegionError(f"region is not concave ({cls.kind}); witnesses: {cls.witnesses}")


def gromov_width_concave(region: Region, tol: float = 1e-6) -> CapacityReport:
    """Gromov width of a concave toric domain, computed two ways.

    (i) max of [v] over positive integer v with entries summing to n, and
    (ii) the infimum of w_1 + ... + w_n along the radial boundary of Ω.
    Raises :class:`ConsistencyError` when they differ by more than ``tol``.
    """
    _require_concave(region)
    n = region.dim
    index = lattice_vectors(n, n, positive=True)
    brackets = [_min_inner(region, np.asarray(v, dtype=float)) for v in index]
    via_index = max(brackets)
    direct = boundary_min(region, np.ones(n))
    record = VerificationRecord.equality("concave-toric/two-routes", via_index, direct,
                                         tol * max(1.0, abs(direct)))
    if not record.passed:
        raise ConsistencyError(f"Gromov width routes disagree: {via_index!r} vs {direct!r}")
    return CapacityReport(
        value=via_index,
        provenance="concave toric domain: max [v] over v in Z^n_{>0}, sum v = n",
        quantities={"index_set": index, "brackets": brackets, "boundary_min": direct},
        checks=[record],
    )


def capacity_bounds_concave(region: Region) -> tuple[float, float]:
    """[Gromov width, min_i ||e_i||*] bracketing every normalized capacity."""
    lower = gromov_width_concave(region).value
    upper = min(support_norm(region, e) for e in np.eye(region.dim))
    if lower > upper + 1e-9 * max(1.0, upper):
        raise ConsistencyError(f"lower bound {lower} exceeds upper bound {upper}")
    return lower, upper


def product_capacity(regions: Sequence[Region]) -> CapacityReport:
    """Capacity of a product of convex toric domains: min of the factor capacities."""
    if not regions:
        raise RegionError("need at least one factor")
    factors = [capacity_convex_toric(r).value for r in regions]
    value = min(factors)
    direct = capacity_convex_toric(product(*regions)).value
    check = VerificationRecord.equality("product/min-rule", value, direct, 1e-12 * max(1.0, value))
    return CapacityReport(value, "product of convex toric domains: min of factors",
                          {"factor_capacities": factors, "product_region_capacity": direct}, [check])


def region_volume(region: Region) -> float:
    """Lebesgue area of Ω, equal to the symplectic volume of X_Ω."""
    if isinstance(region, Box):
        return float(np.prod(region.upper))
    if isinstance(region, Simplex):
        return region.level ** region.dim / math.factorial(region.dim)
    if isinstance(region, OrthantOfBody):
        return B.volume(region.body) / 2 ** region.dim
    if isinstance(region, Graph2D):
        if region.table is not None:
            x, y = region.table
            return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))
        return integrate(lambda t: float(region.eval(np.array([t]))[0]), 0.0, region.a,
                         QuadratureSpec(abs_tol=1e-11))
    if isinstance(region, Product):
        return region_volume(region.left) * region_volume(region.right)
    if isinstance(region, Scale):
        return region.r ** region.dim * region_volume(region.region)
    raise TypeError(f"not a region: {region!r}")


def viterbo_check(region: Region, tol: float = 1e-9) -> VerificationRecord:
    """c^n <= n! Vol for a convex toric domain; slack = n! Vol - c^n."""
    n = region.dim
    c = capacity_convex_toric(region).value
    vol = region_volume(region)
    return VerificationRecord.inequality("viterbo/convex-toric", c ** n, math.factorial(n) * vol, tol,
                                         capacity=c, volume=vol, n=n)
