"""Mahler volume of l_p-balls as a function of p, and its monotonicity on [1, 2].

M_n(p) = Vol(B^n_p) Vol(B^n_q), q = p/(p-1), has logarithmic derivative
(n/p^2) Φ_n(p) with

    Φ_n(p) = ψ(2 - 1/p) - ψ(1 + 1/p) + ψ(1 + n/p) - ψ(n + 1 - n/p).

Φ_n vanishes at p = 2 and is positive on [1, 2) for n >= 2, which makes M_n
increasing there; p -> p/(p-1) mirrors [1, 2] onto [2, inf].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import INF
from .numerics import QuadratureSpec, digamma, integrate
from .records import VerificationRecord


def _inv(p: float) -> float:
    if not p >= 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    return 0.0 if p == INF else 1.0 / p


def mahler_lp(n: int, p: float) -> float:
    """Vol(B^n_p) Vol((B^n_p)°) in closed form; p = inf is the exact q = 1 limit."""
    if n < 1:
        raise ValueError("n must be positive")
    s = _inv(p)
    num = (4.0 * math.gamma(1 + s) * math.gamma(2 - s)) ** n
    return num / (math.gamma(1 + n * s) * math.gamma(n + 1 - n * s))


def _check_12(p: float) -> float:
    if not 1 <= p <= 2:
        raise ValueError(f"p must lie in [1, 2], got {p}")
    return 1.0 / p


def phi(n: int, p: float) -> float:
    """Φ_n(p), the bracketed digamma combination."""
    s = _check_12(p)
    return digamma(2 - s) - digamma(1 + s) + digamma(1 + n * s) - digamma(n + 1 - n * s)


def mahler_derivative(n: int, p: float) -> float:
    """d/dp M_n(p) = (n/p^2) Φ_n(p) M_n(p) for p in [1, 2] (one-sided at the ends)."""
    _check_12(p)
    return n / (p * p) * phi(n, p) * mahler_lp(n, p)


def phi_integrand_f(n: int, y: float) -> float:
    """f(y) = a (1 - y) y^(a-1) / (1 - y^a), a = 1/n; decreases from +inf to 1 on (0, 1)."""
    if not 0 < y < 1:
        raise ValueError(f"y must lie in (0, 1), got {y}")
    a = 1.0 / n
    return a * (1.0 - y) * y ** (a - 1.0) / -math.expm1(a * math.log(y))


def phi_integrand_g(a: float, y: float) -> float:
    """g(y) = a - a y - 1 + y^a; the sign of f' is the sign of g."""
    if not 0 < a <= 1:
        raise ValueError(f"a must lie in (0, 1], got {a}")
    if not 0 <= y <= 1:
        raise ValueError(f"y must lie in [0, 1], got {y}")
    if y == 0:
        return a - 1.0
    # a(1 - y) - (1 - y^a), with 1 - y^a taken from expm1
    return a * (1.0 - y) + math.expm1(a * math.log(y))


def phi_integrand(n: int, p: float, y: float) -> float:
    """(y^(1-1/p) - y^(1/p)) (f(y) - 1) / (1 - y), whose integral over (0, 1) is Φ_n(p)."""
    s = 1.0 / p
    return (y ** (1 - s) - y ** s) * (phi_integrand_f(n, y) - 1.0) / (1.0 - y)


def phi_integral_check(n: int, p: float, tol: float = 1e-7) -> VerificationRecord:
    """Compare Φ_n(p) from digamma values with its integral representation."""
    if not 1 < p < 2:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    if n == 1:
        value = 0.0
    else:
        # y = t^n removes the y^(1/n - 1) endpoint singularity of f
        value = integrate(lambda t: n * t ** (n - 1) * phi_integrand(n, p, t ** n) if t > 0 else 0.0,
                          0.0, 1.0, QuadratureSpec(abs_tol=1e-12))
    return VerificationRecord.equality("phi/integral-vs-digamma", value, phi(n, p), tol, n=n, p=p)


@dataclass
class MahlerScan:
    n: int
    p_grid: np.ndarray
    values: np.ndarray
    phi_values: np.ndarray
    derivatives: np.ndarray
    records: list[VerificationRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def rows(self):
        for p, m, f, d in zip(self.p_grid, self.values, self.phi_values, self.derivatives):
            yield self.n, float(p), float(m), float(f), float(d)

    def write_csv(self, fh, header: bool = True) -> None:
        w = csv.writer(fh)
        if header:
            w.writerow(["n", "p", "mahler", "phi", "derivative"])
        for row in self.rows():
            w.writerow([row[0]] + [repr(x) for x in row[1:]])


def monotonicity_scan(n: int, grid_size: int) -> MahlerScan:
    """M_n on a uniform grid of [1, 2], with the checks that make it a proof sketch.

    Records: strict increase between neighbours, M_n(1) = 4^n/n!, M_n(2) equal to
    the squared Euclidean ball volume, and positive derivative at interior nodes.
    """
    if n < 2 or grid_size < 3:
        raise ValueError("scan needs n >= 2 and grid_size >= 3")
    grid = np.linspace(1.0, 2.0, grid_size)
    values = np.array([mahler_lp(n, p) for p in grid])
    phis = np.array([phi(n, p) for p in grid])
    derivs = n / grid ** 2 * phis * values
    steps = np.diff(values)
    ball = math.pi ** (n / 2) / math.gamma(1 + n / 2)
    hanner = 4.0 ** n / math.factorial(n)
    interior = derivs[1:-1]
    records = [
        VerificationRecord.boolean(f"mahler-scan/n{n}/increasing", bool(steps.min() > 0),
                                   min_step=float(steps.min())),
        VerificationRecord.equality(f"mahler-scan/n{n}/p1", values[0], hanner, 1e-12, relative=True),
        VerificationRecord.equality(f"mahler-scan/n{n}/p2", values[-1], ball * ball, 1e-12, relative=True),
        VerificationRecord.boolean(f"mahler-scan/n{n}/derivative-positive", bool(interior.min() > 0),
                                   min_derivative=float(interior.min())),
    ]
    return MahlerScan(n, grid, values, phis, derivs, records)
