import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcap import bodies as B
from symcap import lagrangian as L
from symcap import toric as T
from symcap.numerics import RngStream, gamma
from symcap.oracles import mc_check
from symcap.sampling import random_body

INF = math.inf
seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [1, 1.5, 2, 3, INF])
def test_cube_product_of_lp_ball(n, p):
    rep = L.capacity_cube_product(B.LpBall(n, p))
    assert rep.value == pytest.approx(4.0, abs=1e-10)
    assert rep.verified


def test_cube_product_examples():
    assert L.capacity_cube_product(B.diagonal([1, 2], B.LpBall(2, INF))).value == pytest.approx(4.0)
    assert L.capacity_cube_product(B.scaled(B.LpBall(3, INF), 1.5)).value == pytest.approx(6.0)
    with pytest.raises(ValueError):
        L.capacity_cube_product(B.LinearImage(B.rotation(0.4), B.LpBall(2, 1)))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cube_product_two_routes(seed):
    gen = np.random.default_rng(seed)
    body = random_body(gen, int(gen.integers(1, 5)), unconditional=True)
    rep = L.capacity_cube_product(body)
    assert rep.value == pytest.approx(rep.quantities["toric_route"], rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_selfpolar_chain(seed):
    gen = np.random.default_rng(seed)
    body = random_body(gen, int(gen.integers(1, 6)), unconditional=True)
    rec = L.selfpolar_capacity_bound(body)
    assert rec.passed
    assert rec.quantities["bound"] <= 4 + 1e-9
    n = body.dim
    for j in range(n):
        assert rec.quantities[f"dual_{j}"] <= 1 / rec.quantities[f"primal_{j}"] + 1e-9
    assert L.selfpolar_viterbo_check(body).passed


def test_selfpolar_capacity_bound_is_sharp_for_lp():
    for p in (1, 1.5, 3, INF):
        rec = L.selfpolar_capacity_bound(B.LpBall(3, p))
        assert rec.quantities["bound"] == pytest.approx(4.0, rel=1e-12)


def test_selfpolar_capacity_lp_examples():
    assert L.selfpolar_capacity_lp(3, 1.5).value == 4.0
    rep = L.selfpolar_capacity_lp(2, 1)
    assert rep.value == 4.0 and rep.verified
    assert rep.quantities["cube_product"] == pytest.approx(4.0)


@pytest.mark.parametrize("p", [1.0, 1.25, 1.5, 3.0, 7.0, INF])
def test_selfpolar_capacity_lp_symmetric(p):
    q = B.conjugate_exponent(p)
    assert L.selfpolar_capacity_lp(2, p).value == L.selfpolar_capacity_lp(2, q).value


def test_xp_capacity_examples():
    assert L.xp_capacity(1).value == pytest.approx(math.pi / 2, rel=1e-15)
    rep = L.xp_capacity(2)
    assert rep.value == pytest.approx(math.pi, rel=1e-15)
    assert rep.quantities["concave_branch"] == pytest.approx(math.pi, rel=1e-12)
    assert rep.verified
    assert L.xp_capacity(INF).value == 4.0
    assert L.xp_capacity(3).value == pytest.approx(4 * gamma(4 / 3) ** 2 / gamma(5 / 3), rel=1e-15)


def test_xp_gp_examples():
    for p in (1.0, 1.5, 2.0, 4.0):
        vmax = 0.25 ** (1 / p)
        assert L.xp_gp(p, vmax) == pytest.approx(0.0, abs=1e-12)
    assert L.xp_gp(2.0, 0.0) == pytest.approx(math.pi / 2, abs=1e-10)
    with pytest.raises(ValueError):
        L.xp_gp(2.0, 0.6)


def test_xp_curve_examples():
    assert L.xp_curve(INF, 1.0) == pytest.approx((2 * math.pi, 0.0), abs=1e-12)
    assert L.xp_curve(INF, -1.0) == pytest.approx((0.0, 2 * math.pi), abs=1e-12)
    assert L.xp_curve(INF, 0.0) == pytest.approx((2.0, 2.0), abs=1e-12)
    for p in (1.0, 1.7, 3.0):
        vmax = 0.25 ** (1 / p)
        assert L.xp_curve(p, vmax) == pytest.approx((2 * math.pi * vmax, 0.0), abs=1e-10)
    with pytest.raises(ValueError):
        L.xp_curve(INF, 1.5)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 2.5, 6.0, INF])
def test_xp_curve_mirror_symmetry(p):
    vmax = 1.0 if p == INF else 0.25 ** (1 / p)
    for v in np.linspace(0, vmax, 13):
        w1, w2 = L.xp_curve(p, float(v))
        m1, m2 = L.xp_curve(p, float(-v))
        assert abs(w1 - m2) <= 1e-10 and abs(w2 - m1) <= 1e-10


def test_xp_membership_examples():
    assert L.xp_membership(2, np.zeros(4))
    assert L.xp_membership(INF, [1, 0, 1, 0])
    assert not L.xp_membership(1, [0.6, 0, 0.6, 0])
    with pytest.raises(ValueError):
        L.xp_membership(2, [0, 0, 0])


def test_omega_infinity_area():
    assert L.omega_p_area(INF, 100_001) == pytest.approx(math.pi ** 2, abs=1e-4)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, INF])
def test_area_matches_volume_of_xp(p):
    area = L.omega_p_area(p, 20001)
    dom = L.XpDomain(p)
    assert area == pytest.approx(dom.volume(), rel=1e-5)
    ok, ests = mc_check(area, dom.contains, dom.bbox(), 1_000_000, RngStream(20200820, 300))
    assert ok, ests


@pytest.mark.parametrize("p,kind", [(1.0, "Convex"), (1.6, "Convex"), (2.0, "Convex"),
                                    (2.5, "Concave"), (INF, "Concave")])
def test_omega_classification(p, kind):
    cls = T.classify(L.omega_p_region(p))
    assert cls.kind == kind
    if p == 2.0:
        assert cls.concave


@pytest.mark.parametrize("p", [1.0, 1.25, 1.5, 1.75, 2.0])
def test_omega_convex_capacity(p):
    cap = T.capacity_convex_toric(L.omega_p_region(p)).value
    assert cap == pytest.approx(L.xp_capacity(p).value, rel=1e-5)


@pytest.mark.parametrize("p", [2.0, 3.0, 5.0, INF])
def test_omega_gromov_width(p):
    width = T.gromov_width_concave(L.omega_p_region(p)).value
    assert width == pytest.approx(L.xp_capacity(p).value, abs=1e-6)


def test_lagrangian_product():
    prod = L.LagrangianProduct(B.LpBall(2, INF), B.LpBall(2, 1))
    assert prod.volume() == pytest.approx(8.0)
    assert prod.contains([[1, 1, 0.5, 0.5]])[0]
    with pytest.raises(ValueError):
        L.LagrangianProduct(B.LpBall(2, 2), B.LpBall(3, 2))
