"""Brute-force checks: Monte Carlo volume, grid support maximisation,
finite differences and polygon area.

Nothing in here knows about the closed forms it is used to check; every
routine works from a membership predicate or plain function values.

A membership predicate takes an array of shape (N, d) and returns a boolean
array of shape (N,).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .numerics import RngStream

Membership = Callable[[np.ndarray], np.ndarray]

MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.std_error < 0 or self.samples < 1:
            raise ValueError("invalid Monte Carlo estimate")

    def within(self, exact: float, sigmas: float = 3.0) -> bool:
        # rounding floor: a body filling its box gives std_error == 0
        floor = 1e-12 * max(1.0, abs(exact))
        return abs(self.mean - exact) <= sigmas * self.std_error + floor


def _as_bbox(bbox) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = (np.asarray(b, dtype=float) for b in bbox)
    if lo.shape != hi.shape or lo.ndim != 1 or not np.all(hi > lo):
        raise ValueError(f"degenerate bounding box {lo} .. {hi}")
    return lo, hi


def mc_volume(membership: Membership, bbox, samples: int, rng: RngStream,
              threads: int = 1) -> MCEstimate:
    """Hit-or-miss volume estimate inside the box ``bbox = (lo, hi)``.

    Samples are drawn in fixed-size blocks, block k from sub-key k of ``rng``,
    so the estimate does not depend on ``threads``.
    """
    lo, hi = _as_bbox(bbox)
    if samples < 1000:
        raise ValueError("mc_volume needs at least 1000 samples")
    d = lo.size
    sizes = [MC_BLOCK] * (samples // MC_BLOCK)
    if samples % MC_BLOCK:
        sizes.append(samples % MC_BLOCK)

    def hits(k: int) -> int:
        gen = rng.generator(k)
        x = lo + (hi - lo) * gen.random((sizes[k], d))
        return int(np.count_nonzero(membership(x)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            total = sum(pool.map(hits, range(len(sizes))))
    else:
        total = sum(hits(k) for k in range(len(sizes)))
    box = float(np.prod(hi - lo))
    frac = total / samples
    se = box * math.sqrt(frac * (1.0 - frac) / samples)
    return MCEstimate(box * frac, se, samples, rng.seed)


def mc_check(exact: float, membership: Membership, bbox, samples: int, rng: RngStream,
             sigmas: float = 3.0, retries: int = 1, threads: int = 1) -> tuple[bool, list[MCEstimate]]:
    """Compare ``exact`` with Monte Carlo, allowing ``retries`` fresh-stream reruns.

    A single miss only triggers a rerun on the next stream id; the check fails
    when every attempt misses.
    """
    estimates = []
    for attempt in range(retries + 1):
        est = mc_volume(membership, bbox, samples, rng.substream(rng.stream_id + 1000 * attempt), threads)
        estimates.append(est)
        if est.within(exact, sigmas):
            return True, estimates
    return False, estimates


def _grid_axes(lo: np.ndarray, hi: np.ndarray, resolution: int) -> list[np.ndarray]:
    # k/resolution is exact for the dyadic refinements used by callers
    t = np.arange(resolution + 1) / resolution
    return [l + (h - l) * t for l, h in zip(lo, hi)]


def _grid_max(membership: Membership, lo, hi, v, resolution, chunk=1 << 20):
    axes = _grid_axes(lo, hi, resolution)
    d = len(axes)
    best, arg = -math.inf, None
    # iterate over the first axis in slabs to bound memory
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, d - 1) if d > 1 else None
    per = 1 if rest is None else rest.shape[0]
    step = max(1, chunk // per)
    for start in range(0, axes[0].size, step):
        x0 = axes[0][start:start + step]
        if rest is None:
            pts = x0[:, None]
        else:
            pts = np.concatenate([np.repeat(x0, per)[:, None], np.tile(rest, (x0.size, 1))], axis=1)
        inside = membership(pts)
        if not np.any(inside):
            continue
        vals = pts[inside] @ v
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, arg = float(vals[k]), pts[inside][k]
    return best, arg


def _radial_extent(membership: Membership, center: np.ndarray, u: np.ndarray, upper: float) -> float:
    lo, hi = 0.0, upper
    while hi - lo > 1e-15 * upper:
        mid = 0.5 * (lo + hi)
        if membership((center + mid * u)[None, :])[0]:
            lo = mid
        else:
            hi = mid
    return lo


def _radial_polish(membership, center, v, arg, upper, best):
    from scipy.optimize import minimize

    def point(w):
        n = np.linalg.norm(w)
        if n == 0:
            return center
        u = w / n
        return center + _radial_extent(membership, center, u, upper) * u

    w0 = arg - center
    if not np.linalg.norm(w0) > 0:
        return best
    res = minimize(lambda w: -float(point(w) @ v), w0 / np.linalg.norm(w0), method="Nelder-Mead",
                   options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000})
    x = point(res.x)
    return max(best, float(x @ v)) if membership(x[None, :])[0] else best


def grid_support(membership: Membership, bbox, v, resolution: int, refine: int = 0,
                 center=None) -> float:
    """Largest <v, x> over member points of a regular grid on ``bbox``.

    Grid points are lo + (hi - lo) * k / resolution, so doubling ``resolution``
    keeps every coarse point and the estimate never decreases. The result is a
    lower bound for the true support value.

    ``refine > 0`` adds that many zoom passes: a 16-point-per-axis grid on a box
    of four pitches around the incumbent, clipped to ``bbox``. The window is
    recentred at the same scale while the incumbent moves by more than one pitch
    and shrinks fourfold otherwise.

    With ``center`` given (a point of the closed set that it is star-shaped
    about) the incumbent is then polished along rays: the direction is moved by
    Nelder-Mead and the radial extent found by bisection. For convex sets the
    objective over directions is quasi-concave, so this cannot stop at a false
    local maximum. Every candidate is a member, so the result stays a lower bound.
    """
    lo, hi = _as_bbox(bbox)
    v = np.asarray(v, dtype=float)
    if resolution < 10:
        raise ValueError("grid_support needs resolution >= 10")
    best, arg = _grid_max(membership, lo, hi, v, resolution)
    if arg is None:
        raise ValueError("no grid point lies inside the body")
    pitch = (hi - lo) / resolution
    for _ in range(refine):
        zlo = np.maximum(lo, arg - 2 * pitch)
        zhi = np.minimum(hi, arg + 2 * pitch)
        b, a = _grid_max(membership, zlo, zhi, v, 16)
        moved = 0.0
        if a is not None and b > best:
            moved = float(np.max(np.abs(a - arg) / pitch))
            best, arg = b, a
        # a long step means the optimum may lie beyond the window
        if moved <= 1.0:
            pitch = pitch / 4
        if np.all(pitch <= 1e-14 * np.maximum(1.0, np.abs(arg))):
            break
    if center is not None:
        c = np.asarray(center, dtype=float)
        best = _radial_polish(membership, c, v, arg, float(np.linalg.norm(hi - lo)), best)
    return best


def axis_extent(membership: Membership, axis: int, dim: int, upper: float = 1.0,
                tol: float = 1e-13) -> float:
    """sup{t >= 0 : t e_axis is a member}, by doubling then bisection.

    Assumes membership along the ray is an interval starting at 0, which holds
    for star-shaped sets.
    """
    e = np.zeros((1, dim))
    e[0, axis] = 1.0

    def inside(t):
        return bool(membership(t * e)[0])

    lo, hi = 0.0, upper
    while inside(hi):
        lo, hi = hi, 2 * hi
        if hi > 1e15:
            raise ValueError("set looks unbounded along the axis")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def finite_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference (f(x+h) - f(x-h)) / 2h."""
    if not h > 0:
        raise ValueError("step must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def _segments_cross(p1, p2, q1, q2, eps=0.0) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and \
            ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)):
        return True
    return False


def polygon_self_intersects(points) -> bool:
    """Proper crossings between non-adjacent edges of a closed polygon.

    Sweep over x-extents; only edges with overlapping x-ranges are tested, which
    keeps x-monotone curves close to linear time. Touching and collinear overlaps
    are not reported.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 4:
        return False
    a, b = pts, np.roll(pts, -1, axis=0)
    xmin = np.minimum(a[:, 0], b[:, 0])
    xmax = np.maximum(a[:, 0], b[:, 0])
    order = np.argsort(xmin, kind="stable")
    active: list[int] = []
    for i in order:
        active = [j for j in active if xmax[j] >= xmin[i]]
        for j in active:
            if abs(i - j) in (1, n - 1):
                continue
            if _segments_cross(a[i], b[i], a[j], b[j]):
                return True
        active.append(int(i))
    return False


def shoelace_area(points, check: bool = True) -> float:
    """Area of a closed polygon given by its vertices in order (either orientation)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least three 2D points")
    if check and polygon_self_intersects(pts):
        raise ValueError("polygon is self-intersecting")
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def box_membership(lo: Sequence[float], hi: Sequence[float]) -> Membership:
    lo_, hi_ = np.asarray(lo, float), np.asarray(hi, float)
    return lambda x: np.all((x >= lo_) & (x <= hi_), axis=1)
