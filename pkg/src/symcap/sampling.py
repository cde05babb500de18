"""Seeded generators of random bodies, regions and matrices for property checks."""

from __future__ import annotations

import math

import numpy as np

from . import bodies as B
from . import toric as T

P_CHOICES = (1.0, 1.25, 1.5, 2.0, 3.0, 4.5, B.INF)


def random_p(gen: np.random.Generator) -> float:
    """An exponent from a fixed menu (endpoints included) or uniform in [1, 6]."""
    if gen.random() < 0.6:
        return P_CHOICES[int(gen.integers(len(P_CHOICES)))]
    return float(1.0 + 5.0 * gen.random())


def random_body(gen: np.random.Generator, dim: int, depth: int = 3,
                unconditional: bool = True) -> B.Body:
    """Random expression tree of exactly ``dim`` dimensions.

    With ``unconditional`` only diagonal linear images are used, so the result
    is coordinate-unconditional.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    if dim == 1:
        return B.Segment(float(0.3 + 2.0 * gen.random()))
    if depth <= 0 or gen.random() < 0.3:
        body: B.Body = B.LpBall(dim, random_p(gen))
    else:
        k = int(gen.integers(1, dim))
        left = random_body(gen, k, depth - 1, unconditional)
        right = random_body(gen, dim - k, depth - 1, unconditional)
        body = B.Cartesian(left, right) if gen.random() < 0.3 else B.PProduct(random_p(gen), left, right)
    if gen.random() < 0.3:
        m = np.diag(0.5 + 1.5 * gen.random(dim)) if unconditional else random_invertible(gen, dim)
        body = B.LinearImage(m, body)
    return body


def random_invertible(gen: np.random.Generator, dim: int, max_cond: float = 50.0) -> np.ndarray:
    """Gaussian matrix, redrawn until its condition number is at most ``max_cond``."""
    for _ in range(1000):
        m = gen.standard_normal((dim, dim))
        if np.linalg.cond(m) <= max_cond:
            return m
    raise RuntimeError("could not draw a well-conditioned matrix")


def random_convex_region(gen: np.random.Generator, dim: int, depth: int = 2) -> T.Region:
    """Random convex moment region: box, simplex, body orthant, product or scaling."""
    kinds = ["box", "simplex", "orthant"]
    if depth > 0:
        kinds.append("scale")
        if dim > 1:
            kinds.append("product")
    kind = kinds[int(gen.integers(len(kinds)))]
    if kind == "box":
        return T.Box(tuple(float(x) for x in 0.5 + 2.0 * gen.random(dim)))
    if kind == "simplex":
        return T.Simplex(float(0.5 + 3.0 * gen.random()), dim)
    if kind == "orthant":
        return T.OrthantOfBody(random_body(gen, dim, depth=2, unconditional=True))
    if kind == "scale":
        return T.Scale(float(0.5 + 2.0 * gen.random()),
                       random_convex_region(gen, dim, depth - 1))
    k = int(gen.integers(1, dim))
    return T.Product(random_convex_region(gen, k, depth - 1),
                     random_convex_region(gen, dim - k, depth - 1))


def region_bbox(region: T.Region) -> tuple[np.ndarray, np.ndarray]:
    """Axis box [0, ||e_i||*] around a region (support norms are exact upper extents)."""
    hi = np.array([T.support_norm(region, e) for e in np.eye(region.dim)])
    return np.zeros(region.dim), hi


def body_bbox(body: B.Body) -> tuple[np.ndarray, np.ndarray]:
    h = B.bounding_box(body)
    return -h, h


def hanner_specs(n: int) -> list[tuple[float, ...]]:
    """All 2^(n-1) left-associated Hanner specs in dimension n."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for mask in range(2 ** (n - 1)):
        out.append(tuple(B.INF if (mask >> i) & 1 else 1.0 for i in range(n - 1)))
    return out


def log_uniform(gen: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * gen.random()))
