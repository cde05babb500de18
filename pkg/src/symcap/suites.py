"""Verification suites: each one runs a batch of checks and returns records.

A suite is a pure function of :class:`SuiteConfig`; its random inputs come from
its own stream of the configured seed, so suites can run in any order or
concurrently with identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bodies as B
from . import lagrangian as L
from . import mahler as M
from . import oracles as O
from . import sampling as S
from . import toric as T
from .numerics import RngStream, gamma
from .records import VerificationRecord

DEFAULT_SEED = 20200820


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    mc_samples: int = 1_000_000
    threads: int = 1
    scan_grid: int = 1000

    def rng(self, stream: int) -> RngStream:
        return RngStream(self.seed, stream)

    def gen(self, stream: int) -> np.random.Generator:
        return self.rng(stream).generator()


Records = list[VerificationRecord]


def _rel(claim: str, a: float, b: float, tol: float, **q) -> VerificationRecord:
    return VerificationRecord.equality(claim, a, b, tol, relative=True, **q)


# --------------------------------------------------------------------------- toric


def oracle_equivalence(cfg: SuiteConfig, count: int = 20, tol: float = 1e-5) -> Records:
    """Closed-form convex capacity against a brute-force grid maximisation."""
    gen = cfg.gen(1)
    out = []
    for k in range(count):
        n = int(gen.integers(2, 4))
        region = S.random_convex_region(gen, n)
        cap = T.capacity_convex_toric(region).value

        def member(w, region=region):
            return T.region_contains(region, w)

        # the box overshoots the region so the maximiser is an interior grid point
        hi = 1.25 * np.array([O.axis_extent(member, i, n) for i in range(n)])
        res = 48 if n == 2 else 24
        origin = np.zeros(n)
        grid = min(O.grid_support(member, (origin, hi), e, res, refine=40, center=origin) for e in np.eye(n))
        out.append(_rel(f"convex-toric/oracle[{k}]", cap, grid, tol, region=type(region).__name__, n=n))
    return out


def normalization(cfg: SuiteConfig) -> Records:
    out = []
    for n in range(1, 6):
        rep = T.capacity_convex_toric(T.Simplex(math.pi, n))
        out.append(VerificationRecord.equality(f"convex-toric/simplex-pi/n{n}", rep.value, math.pi, 1e-12))
        out.extend(rep.checks)
    return out


def product_rule(cfg: SuiteConfig, count: int = 10) -> Records:
    gen = cfg.gen(2)
    out = []
    for k in range(count):
        factors = [S.random_convex_region(gen, int(gen.integers(1, 3)), depth=1) for _ in range(2)]
        out.extend(T.product_capacity(factors).checks)
    return out


def concave_bounds(cfg: SuiteConfig) -> Records:
    """Gromov width <= min_i ||e_i||* on graph regions with convex f and f(a) = 0."""
    cases = [("(sqrt(4)-sqrt(x))**2", 4.0, 2.0), ("(1 - x/3)**2 * 2", 3.0, None),
             ("(1 - sqrt(x/2))**2 * 5", 2.0, None)]
    from .schema import compile_expression

    out = []
    for expr, a, width in cases:
        g = T.Graph2D(a, compile_expression(expr), expr=expr)
        lo, hi = T.capacity_bounds_concave(g)
        out.append(VerificationRecord.inequality(f"concave-toric/bounds/{expr}", lo, hi, 1e-9,
                                                 lower=lo, upper=hi))
        if width is not None:
            out.append(VerificationRecord.equality(f"concave-toric/width/{expr}", lo, width, 1e-8))
    return out


def viterbo_regions(cfg: SuiteConfig, count: int = 20) -> Records:
    gen = cfg.gen(3)
    out = []
    for k in range(count):
        region = S.random_convex_region(gen, int(gen.integers(2, 4)))
        rec = T.viterbo_check(region)
        rec.claim_id += f"[{k}]"
        out.append(rec)
    return out


# --------------------------------------------------------------------------- lagrangian


def cube_product(cfg: SuiteConfig) -> Records:
    out = []
    for n in (2, 3, 4):
        for p in (1.0, 1.5, 2.0, 3.0, B.INF):
            rep = L.capacity_cube_product(B.LpBall(n, p))
            out.append(VerificationRecord.equality(f"cube-product/n{n}/p{p}", rep.value, 4.0, 1e-10))
            out.extend(rep.checks)
    return out


def _unconditional_bodies(cfg: SuiteConfig, count: int) -> list[B.Body]:
    gen = cfg.gen(4)
    return [S.random_body(gen, int(gen.integers(1, 6)), depth=3, unconditional=True) for _ in range(count)]


def selfpolar_chain(cfg: SuiteConfig, count: int = 50) -> Records:
    out = []
    for k, body in enumerate(_unconditional_bodies(cfg, count)):
        rec = L.selfpolar_capacity_bound(body)
        rec.claim_id += f"[{k}]"
        out.append(rec)
    return out


def selfpolar_viterbo(cfg: SuiteConfig, count: int = 50) -> Records:
    out = []
    for k, body in enumerate(_unconditional_bodies(cfg, count)):
        rec = L.selfpolar_viterbo_check(body)
        rec.claim_id += f"[{k}]"
        out.append(rec)
    return out


def xp_table(cfg: SuiteConfig) -> Records:
    expected = {1.0: math.pi / 2, 1.5: 2 * math.pi * 4 ** (-2 / 3), 2.0: math.pi,
                3.0: 4 * gamma(4 / 3) ** 2 / gamma(5 / 3), B.INF: 4.0}
    out = []
    for p, want in expected.items():
        rep = L.xp_capacity(p)
        out.append(_rel(f"xp-capacity/p{p}", rep.value, want, 1e-12))
        out.extend(rep.checks)
    return out


def xp_transport(cfg: SuiteConfig) -> Records:
    """Ω_p polygon area against Monte Carlo volume of X_p, plus capacities via Ω_p."""
    out = []
    for k, p in enumerate((1.0, 1.5, 2.0, 3.0, B.INF)):
        area = L.omega_p_area(p, 20001)
        dom = L.XpDomain(p)
        ok, ests = O.mc_check(area, dom.contains, dom.bbox(), cfg.mc_samples, cfg.rng(100 + k))
        est = ests[-1]
        out.append(VerificationRecord.boolean(f"xp-transport/mc/p{p}", ok, area=area, mc_mean=est.mean,
                                              mc_std_error=est.std_error, attempts=len(ests)))
        out.append(_rel(f"xp-transport/closed-form-volume/p{p}", area, dom.volume(), 1e-5))
    for p in (1.0, 1.25, 1.5, 1.75, 2.0):
        cap = T.capacity_convex_toric(L.omega_p_region(p)).value
        out.append(_rel(f"xp-transport/convex-capacity/p{p}", cap, L.xp_capacity(p).value, 1e-5))
    width = T.gromov_width_concave(L.omega_p_region(B.INF)).value
    out.append(VerificationRecord.equality("xp-transport/gromov-width/pinf", width, 4.0, 1e-6))
    return out


# --------------------------------------------------------------------------- bodies


def hanner_equality(cfg: SuiteConfig, count: int = 50) -> Records:
    out = []
    for n in range(2, 6):
        target = 4.0 ** n / math.factorial(n)
        for spec in S.hanner_specs(n):
            tag = "".join("i" if p == B.INF else "1" for p in spec)
            out.append(_rel(f"hanner/n{n}/{tag}", B.mahler(B.hanner(spec)), target, 1e-10))
    for k, body in enumerate(_unconditional_bodies(cfg, count)):
        n = body.dim
        out.append(VerificationRecord.inequality(f"mahler-lower-bound/random[{k}]", 4.0 ** n,
                                                 math.factorial(n) * B.mahler(body), 1e-9, n=n))
    return out


def duality(cfg: SuiteConfig, count: int = 20) -> Records:
    gen = cfg.gen(5)
    out = []
    for k in range(count):
        body = S.random_body(gen, int(gen.integers(1, 6)), unconditional=bool(k % 2))
        x = gen.standard_normal((200, body.dim))
        a, b = B.gauge(body, x), B.gauge(B.polar(B.polar(body)), x)
        err = float(np.max(np.abs(a - b) / np.maximum(1.0, a)))
        out.append(VerificationRecord("duality/double-polar" + f"[{k}]", -err, 1e-10, {"max_error": err}))
    for k in range(count):
        n = int(gen.integers(2, 6))
        body = S.random_body(gen, n, unconditional=False)
        image = B.LinearImage(S.random_invertible(gen, n), body)
        out.append(_rel(f"duality/mahler-affine-invariance[{k}]", B.mahler(image), B.mahler(body), 1e-9))
    for n in (1, 2, 3, 5):
        for p in (1.0, 1.3, 2.0, 3.0, 7.0, B.INF):
            out.append(_lp_polar_by_sampling(gen, n, p))
    return out


def _lp_polar_by_sampling(gen, n: int, p: float) -> VerificationRecord:
    """(B^n_p)° = B^n_q from the definition: no sampled x in B_p beats the polar gauge,
    and the Hölder extremiser attains it."""
    q = B.conjugate_exponent(p)
    ball = B.LpBall(n, p)
    polar_gauge = B.gauge(B.polar(ball), np.ones(n))  # structural answer for y = (1..1)
    worst = 0.0
    for _ in range(5):
        y = gen.standard_normal(n)
        h = float(B.gauge(B.polar(ball), y))
        x = gen.standard_normal((4000, n))
        x /= B.gauge(ball, x)[:, None]
        over = float(np.max(x @ y) - h)
        # extremiser of <y, x> on the sphere of B_p
        if p == 1:
            xs = np.zeros(n)
            i = int(np.argmax(np.abs(y)))
            xs[i] = math.copysign(1.0, y[i])
        elif p == B.INF:
            xs = np.sign(y)
        else:
            xs = np.sign(y) * np.abs(y) ** (q - 1)
            xs /= B.gauge(ball, xs)
        attained = abs(float(xs @ y) - h)
        ref = float(np.sum(np.abs(y) ** q) ** (1 / q)) if q != B.INF else float(np.max(np.abs(y)))
        worst = max(worst, over / h, attained / h, abs(ref - h) / h)
    return VerificationRecord(f"duality/lp-polar/n{n}/p{p}", -worst, 1e-10,
                              {"worst_relative": worst, "gauge_at_ones": polar_gauge})


def mc_volumes(cfg: SuiteConfig, count: int = 20) -> Records:
    """Closed-form volumes of random body trees against Monte Carlo."""
    gen = cfg.gen(6)
    out = []
    for k in range(count):
        body = S.random_body(gen, int(gen.integers(1, 5)), unconditional=bool(k % 2))
        exact = B.volume(body)

        def member(x, body=body):
            return B.gauge(body, x) <= 1.0

        ok, ests = O.mc_check(exact, member, S.body_bbox(body), cfg.mc_samples, cfg.rng(200 + k))
        out.append(VerificationRecord.boolean(f"bodies/mc-volume[{k}]", ok, exact=exact,
                                              mc_mean=ests[-1].mean, mc_std_error=ests[-1].std_error,
                                              attempts=len(ests)))
    return out


def grid_bounds(cfg: SuiteConfig, count: int = 10) -> Records:
    """grid_support <= h_K(v) <= grid_support + ||v||_1 * pitch."""
    gen = cfg.gen(7)
    out = []
    for k in range(count):
        n = int(gen.integers(1, 4))
        body = S.random_body(gen, n, unconditional=False)
        v = gen.standard_normal(n)
        h = float(B.support(body, v))
        lo, hi = S.body_bbox(body)
        res = 64 if n < 3 else 32
        g = O.grid_support(lambda x, body=body: B.gauge(body, x) <= 1.0, (lo, hi), v, res)
        pitch = float(np.max(hi - lo)) / res
        out.append(VerificationRecord.inequality(f"oracles/grid-lower[{k}]", g, h, 1e-12))
        out.append(VerificationRecord.inequality(f"oracles/grid-upper[{k}]", h,
                                                 g + float(np.abs(v).sum()) * pitch, 1e-12))
    return out


# --------------------------------------------------------------------------- mahler


def mahler_scan(cfg: SuiteConfig) -> Records:
    out = []
    for n in range(2, 11):
        out.extend(M.monotonicity_scan(n, cfg.scan_grid).records)
        out.append(VerificationRecord.equality(f"phi/n{n}/p2-zero", M.phi(n, 2.0), 0.0, 1e-12))
        harmonic = sum(1.0 / k for k in range(2, n + 1))
        out.append(VerificationRecord.equality(f"phi/n{n}/p1-harmonic", M.phi(n, 1.0), harmonic, 1e-12))
        grid = np.linspace(1.0, 2.0, cfg.scan_grid)[1:-1]
        low = min(M.phi(n, p) for p in grid)
        out.append(VerificationRecord.boolean(f"phi/n{n}/positive-open-grid", low > 0, min_phi=low))
    ones = max(abs(M.phi(1, p)) for p in np.linspace(1.0, 2.0, 101))
    out.append(VerificationRecord.equality("phi/n1/identically-zero", ones, 0.0, 1e-12))
    return out


def derivative_identity(cfg: SuiteConfig) -> Records:
    out = []
    for n in (2, 3, 5, 8):
        for p in (1.2, 1.5, 1.8):
            fd = O.finite_difference(lambda t, n=n: M.mahler_lp(n, t), p, 1e-5)
            out.append(_rel(f"mahler/derivative/n{n}/p{p}", M.mahler_derivative(n, p), fd, 1e-6))
    return out


def phi_integral(cfg: SuiteConfig) -> Records:
    out = []
    for n in (2, 3, 5):
        for p in (1.25, 1.5, 1.75):
            rec = M.phi_integral_check(n, p, 1e-7)
            rec.claim_id += f"/n{n}/p{p}"
            out.append(rec)
    y = (np.arange(1, 10_001) - 0.5) / 10_000
    for n in range(2, 11):
        f_min = min(M.phi_integrand_f(n, float(t)) for t in y)
        g_max = max(M.phi_integrand_g(1.0 / n, float(t)) for t in y)
        out.append(VerificationRecord.boolean(f"phi/f-above-one/n{n}", f_min > 1, min_f=f_min))
        out.append(VerificationRecord.boolean(f"phi/g-negative/n{n}", g_max < 0, max_g=g_max))
    return out


# --------------------------------------------------------------------------- registry

SUITES: dict[str, Callable[[SuiteConfig], Records]] = {
    "oracle": oracle_equivalence,
    "normalization": normalization,
    "product": product_rule,
    "concave": concave_bounds,
    "cube-product": cube_product,
    "selfpolar": selfpolar_chain,
    "hanner": hanner_equality,
    "mahler-scan": mahler_scan,
    "derivative": derivative_identity,
    "phi-integral": phi_integral,
    "xp-table": xp_table,
    "xp-transport": xp_transport,
    "duality": duality,
    "viterbo": lambda cfg: viterbo_regions(cfg) + selfpolar_viterbo(cfg),
    "mc-volume": mc_volumes,
    "grid-bounds": grid_bounds,
}


def run_suites(names: list[str], cfg: SuiteConfig) -> dict[str, Records]:
    """Run the named suites (``["all"]`` for every one); threads only change scheduling."""
    if names == ["all"] or "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda n: SUITES[n](cfg), names))
    else:
        results = [SUITES[n](cfg) for n in names]
    return dict(zip(names, results))
