"""Centrally symmetric convex bodies built from segments and l_p-balls.

A body is an immutable expression tree. Every node knows its gauge
(Minkowski functional), so membership, support function (gauge of the polar),
polar (structural rewrite) and volume (closed form) all follow by recursion.
Bodies are treated as closed: ``x in K`` iff ``gauge(K, x) <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

INF = math.inf


def conjugate_exponent(p: float) -> float:
    """Hölder conjugate q with 1/p + 1/q = 1 (1 <-> inf)."""
    _check_p(p)
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def _check_p(p: float) -> None:
    if not (p >= 1):
        raise ValueError(f"p must lie in [1, inf], got {p}")


@dataclass(frozen=True)
class Segment:
    """The interval [-radius, radius] in R^1."""

    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ValueError(f"segment radius must be positive and finite, got {self.radius}")

    @property
    def dim(self) -> int:
        return 1


@dataclass(frozen=True)
class LpBall:
    """Closed unit ball of the l_p norm in R^dim."""

    dim: int
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim}")
        _check_p(self.p)


@dataclass(frozen=True)
class Cartesian:
    left: "Body"
    right: "Body"

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim


@dataclass(frozen=True)
class PProduct:
    """p-product: gauge (|x|_K^p + |y|_M^p)^(1/p). p = 1 is the free sum."""

    p: float
    left: "Body"
    right: "Body"

    def __post_init__(self):
        _check_p(self.p)

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim


@dataclass(frozen=True, eq=False)
class LinearImage:
    """Image ``matrix @ body`` under an invertible linear map."""

    matrix: np.ndarray
    body: "Body"
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        n = self.body.dim
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match body dimension {n}")
        det = np.linalg.det(m)
        if not np.isfinite(det) or abs(det) < 1e-300:
            raise ValueError("matrix of a linear image must be invertible")
        if np.linalg.cond(m) > 1e12:
            raise ValueError("matrix of a linear image is numerically singular")
        m.setflags(write=False)
        inv = np.linalg.inv(m)
        inv.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_inverse", inv)

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    def __eq__(self, other):
        return (isinstance(other, LinearImage) and self.body == other.body
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.matrix.tobytes(), self.body))


Body = Union[Segment, LpBall, Cartesian, PProduct, LinearImage]


def dim(body: Body) -> int:
    return body.dim


def _as_points(body: Body, x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    pts = arr[None, :] if single else arr
    if pts.ndim != 2 or pts.shape[1] != body.dim:
        raise ValueError(f"point dimension {arr.shape[-1] if arr.ndim else 0} "
                         f"does not match body dimension {body.dim}")
    return pts, single


def _pmean(a: np.ndarray, b: np.ndarray, p: float) -> np.ndarray:
    if p == INF:
        return np.maximum(a, b)
    if p == 1:
        return a + b
    m = np.maximum(a, b)
    safe = np.where(m > 0, m, 1.0)
    return np.where(m > 0, safe * ((a / safe) ** p + (b / safe) ** p) ** (1.0 / p), 0.0)


def _lp_norm(x: np.ndarray, p: float) -> np.ndarray:
    ax = np.abs(x)
    if p == INF:
        return ax.max(axis=1)
    if p == 1:
        return ax.sum(axis=1)
    # scale by the max so tiny or huge inputs neither underflow nor overflow
    m = ax.max(axis=1)
    safe = np.where(m > 0, m, 1.0)
    return np.where(m > 0, safe * ((ax / safe[:, None]) ** p).sum(axis=1) ** (1.0 / p), 0.0)


def _gauge(body: Body, x: np.ndarray) -> np.ndarray:
    if isinstance(body, Segment):
        return np.abs(x[:, 0]) / body.radius
    if isinstance(body, LpBall):
        return _lp_norm(x, body.p)
    if isinstance(body, (Cartesian, PProduct)):
        k = body.left.dim
        a = _gauge(body.left, x[:, :k])
        b = _gauge(body.right, x[:, k:])
        return _pmean(a, b, INF if isinstance(body, Cartesian) else body.p)
    if isinstance(body, LinearImage):
        return _gauge(body.body, x @ body.inverse.T)
    raise TypeError(f"not a body: {body!r}")


def gauge(body: Body, x):
    """Minkowski functional min{t >= 0 : x in tK}.

    ``x`` may be one point of shape (d,) or a batch of shape (N, d); the result
    is a float or an array of shape (N,) accordingly.
    """
    pts, single = _as_points(body, x)
    g = _gauge(body, pts)
    return float(g[0]) if single else g


def contains(body: Body, x, slack: float = 0.0):
    """Closed-body membership ``gauge(K, x) <= 1 + slack``."""
    g = gauge(body, x)
    return (g <= 1.0 + slack) if not isinstance(g, float) else bool(g <= 1.0 + slack)


def polar(body: Body) -> Body:
    """Polar body {y : <y, x> <= 1 for all x in K}, as an expression tree."""
    if isinstance(body, Segment):
        return Segment(1.0 / body.radius)
    if isinstance(body, LpBall):
        return LpBall(body.dim, conjugate_exponent(body.p))
    if isinstance(body, Cartesian):
        return PProduct(1.0, polar(body.left), polar(body.right))
    if isinstance(body, PProduct):
        return PProduct(conjugate_exponent(body.p), polar(body.left), polar(body.right))
    if isinstance(body, LinearImage):
        return LinearImage(body.inverse.T, polar(body.body))
    raise TypeError(f"not a body: {body!r}")


def support(body: Body, v):
    """Support function h_K(v) = max_{x in K} <v, x>, i.e. the gauge of the polar."""
    return gauge(polar(body), v)


def _gamma_ratio(n: int, m: int, p: float) -> float:
    # Gamma(1+n/p) Gamma(1+m/p) / Gamma(1+(n+m)/p)
    if p == INF:
        return 1.0
    return math.exp(math.lgamma(1 + n / p) + math.lgamma(1 + m / p) - math.lgamma(1 + (n + m) / p))


def volume(body: Body) -> float:
    """Exact Lebesgue volume from the closed forms of each node."""
    if isinstance(body, Segment):
        return 2.0 * body.radius
    if isinstance(body, LpBall):
        n, p = body.dim, body.p
        if p == INF:
            return 2.0 ** n
        return (2.0 * math.gamma(1.0 + 1.0 / p)) ** n / math.gamma(1.0 + n / p)
    if isinstance(body, Cartesian):
        return volume(body.left) * volume(body.right)
    if isinstance(body, PProduct):
        return (volume(body.left) * volume(body.right)
                * _gamma_ratio(body.left.dim, body.right.dim, body.p))
    if isinstance(body, LinearImage):
        return abs(body.det) * volume(body.body)
    raise TypeError(f"not a body: {body!r}")


def mahler(body: Body) -> float:
    """Mahler volume Vol(K) Vol(K°)."""
    return volume(body) * volume(polar(body))


def hanner(spec: Sequence[float]) -> Body:
    """Hanner polytope I x_{p1} I x_{p2} ... I (left-associated), each p in {1, inf}."""
    body: Body = Segment(1.0)
    for p in spec:
        if p == INF:
            body = Cartesian(body, Segment(1.0))
        elif p == 1:
            body = PProduct(1.0, body, Segment(1.0))
        else:
            raise ValueError(f"Hanner spec entries must be 1 or inf, got {p}")
    return body


def is_coordinate_unconditional(body: Body) -> bool:
    """Sufficient structural test for sign-flip invariance in the standard basis."""
    if isinstance(body, (Segment, LpBall)):
        return True
    if isinstance(body, (Cartesian, PProduct)):
        return is_coordinate_unconditional(body.left) and is_coordinate_unconditional(body.right)
    if isinstance(body, LinearImage):
        m = body.matrix
        return bool(np.all(m == np.diag(np.diag(m)))) and is_coordinate_unconditional(body.body)
    return False


def scaled(body: Body, r: float) -> Body:
    return LinearImage(r * np.eye(body.dim), body)


def diagonal(scales: Sequence[float], body: Body) -> Body:
    return LinearImage(np.diag(np.asarray(scales, dtype=float)), body)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def cartesian(*bodies: Body) -> Body:
    out = bodies[0]
    for b in bodies[1:]:
        out = Cartesian(out, b)
    return out


def p_product(p: float, *bodies: Body) -> Body:
    out = bodies[0]
    for b in bodies[1:]:
        out = PProduct(p, out, b)
    return out


def bounding_box(body: Body) -> np.ndarray:
    """Half-widths h_K(e_i) of the tightest axis-aligned box around K."""
    return support(body, np.eye(body.dim))
