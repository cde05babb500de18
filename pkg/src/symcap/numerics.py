"""Special functions, 1D quadrature and reproducible random streams."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _spi

EULER_GAMMA = 0.57721566490153286061

# Bernoulli-number coefficients B_2k / (2k) of the digamma asymptotic series.
_PSI_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_PSI_SHIFT = 8.0


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    max_subdivisions: int = 10_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


def gamma(x: float) -> float:
    """Gamma function for positive real arguments.

    Overflows (``OverflowError``) above x ~ 171.6, where the value leaves the
    double range; use :func:`log_gamma` there.
    """
    x = float(x)
    if not x > 0:
        raise ValueError(f"gamma is only defined here for x > 0, got {x}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma is only defined here for x > 0, got {x}")
    return math.lgamma(x)


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function, psi(x) = Gamma'(x)/Gamma(x).

    The argument is pushed up with psi(x) = psi(x+1) - 1/x until it is at least 8,
    then the Stirling-type asymptotic series is summed.
    """
    x = float(x)
    if not x > 0:
        raise ValueError(f"digamma is only defined here for x > 0, got {x}")
    shift = 0.0
    while x < _PSI_SHIFT:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _PSI_ASYMPTOTIC:
        series += c * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


def digamma_dirichlet(x: float, spec: QuadratureSpec | None = None) -> float:
    """psi(x) from the Dirichlet integral -gamma + int_0^1 (1 - t^(x-1)) / (1 - t) dt.

    Slow; kept as an independent check of :func:`digamma`.
    """
    x = float(x)
    if not x > 0:
        raise ValueError(f"digamma is only defined here for x > 0, got {x}")
    s = x - 1.0

    def integrand(t):
        # expm1 keeps 1 - t^s accurate as t -> 1
        return -math.expm1(s * math.log(t)) / (1.0 - t)

    return -EULER_GAMMA + integrate(integrand, 0.0, 1.0, spec or QuadratureSpec(abs_tol=1e-13))


def integrate(f: Callable[[float], float], a: float, b: float,
              spec: QuadratureSpec | None = None) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over [a, b].

    Integrable endpoint singularities are fine: nodes never touch the endpoints and
    the subdivision is driven by the error estimate. Raises :class:`QuadratureError`
    when ``spec.max_subdivisions`` is exhausted before ``spec.abs_tol`` is met.
    """
    spec = spec or QuadratureSpec()
    if b < a:
        raise ValueError(f"integrate needs a <= b, got [{a}, {b}]")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", _spi.IntegrationWarning)
        try:
            value, err = _spi.quad(f, a, b, epsabs=spec.abs_tol, epsrel=0.0,
                                   limit=spec.max_subdivisions)
        except _spi.IntegrationWarning as exc:
            raise QuadratureError(f"no convergence on [{a}, {b}]: {exc}") from None
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite integral on [{a}, {b}]")
    return value


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    Sub-streams are derived with ``spawn_key`` so that blocks of work can be
    handed to different workers without changing the numbers drawn.
    """

    seed: int
    stream_id: int = 0

    def generator(self, *subkey: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *subkey))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)
