import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcap import bodies as B
from symcap import toric as T
from symcap.oracles import grid_support
from symcap.sampling import random_convex_region, region_bbox

seeds = st.integers(0, 2 ** 32 - 1)


def segment_graph(a, b):
    return T.Graph2D(a, lambda x: b * (1 - x / a))


def sqrt_graph(a):
    return T.Graph2D(a, lambda x: (math.sqrt(a) - np.sqrt(x)) ** 2)


# --------------------------------------------------------------------------- examples


def test_support_norm_examples():
    assert T.support_norm(T.Box((2, 3)), [1, 0]) == 2
    assert T.support_norm(T.Simplex(2.5, 4), np.ones(4)) == 2.5


@pytest.mark.parametrize("a,b", [(2, 3), (3, 2), (1, 1), (0.5, 4)])
def test_segment_boundary(a, b):
    g = segment_graph(a, b)
    assert T.min_inner(g, [1, 1]) == pytest.approx(min(a, b), rel=1e-12)
    assert T.gromov_width_concave(g).value == pytest.approx(min(a, b), rel=1e-12)


@pytest.mark.parametrize("a", [1.0, 4.0, 9.0])
def test_sqrt_boundary(a):
    g = sqrt_graph(a)
    assert T.min_inner(g, [1, 1]) == pytest.approx(a / 2, rel=1e-10)
    assert T.gromov_width_concave(g).value == pytest.approx(a / 2, rel=1e-10)
    lo, hi = T.capacity_bounds_concave(g)
    assert lo == pytest.approx(a / 2, rel=1e-10) and hi == pytest.approx(a, rel=1e-12)
    lo2, hi2 = T.capacity_bounds_concave(T.Scale(2, g))
    assert lo2 == pytest.approx(2 * lo, rel=1e-12) and hi2 == pytest.approx(2 * hi, rel=1e-12)


def test_diagonal_segment_is_both():
    g = segment_graph(3, 3)
    cls = T.classify(g)
    assert cls.convex and cls.concave
    assert T.capacity_bounds_concave(g) == pytest.approx((3, 3), rel=1e-12)
    assert T.capacity_convex_toric(g).value == pytest.approx(3, rel=1e-12)


def test_classify_examples():
    assert T.classify(T.Box((1, 2))).kind == "Convex"
    assert T.classify(sqrt_graph(4)).kind == "Concave"
    assert T.classify(T.Graph2D(1, lambda x: 1 - x ** 2)).kind == "Convex"
    wavy = T.classify(T.Graph2D(1, lambda x: 1 - x + 0.1 * np.sin(2 * np.pi * x)))
    assert wavy.kind == "Neither" and wavy.witnesses


def test_structural_classification_is_certified():
    cls = T.classify(T.OrthantOfBody(B.LpBall(3, 1.5)))
    assert cls.convex and not cls.concave
    assert cls.witnesses


def test_capacity_examples():
    for n in range(1, 6):
        assert T.capacity_convex_toric(T.Simplex(math.pi, n)).value == pytest.approx(math.pi, abs=1e-12)
    assert T.capacity_convex_toric(T.Box((2, 3))).value == 2
    assert T.capacity_convex_toric(T.Scale(1.7, T.Simplex(1, 3))).value == pytest.approx(1.7, rel=1e-15)


def test_capacity_report_records_index_set():
    rep = T.capacity_convex_toric(T.Box((2, 3, 4)))
    assert rep.verified
    assert sorted(rep.quantities["index_set"]) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert rep.provenance


def test_gromov_width_scales():
    g = sqrt_graph(4)
    assert T.gromov_width_concave(T.Scale(3, g)).value == pytest.approx(3 * 2, rel=1e-10)


def test_product_capacity_examples():
    assert T.product_capacity([T.Box((2, 3)), T.Simplex(1, 2)]).value == pytest.approx(1.0)
    box = T.Box((2, 5))
    assert T.product_capacity([box]).value == T.capacity_convex_toric(box).value


def test_region_volume_examples():
    assert T.region_volume(T.Box((2, 3))) == 6
    assert T.region_volume(T.OrthantOfBody(B.LpBall(2, 1))) == pytest.approx(0.5)
    assert T.region_volume(T.Simplex(2.0, 3)) == pytest.approx(8 / 6)
    assert T.region_volume(sqrt_graph(1.0)) == pytest.approx(1 / 6, rel=1e-10)


def test_viterbo_examples():
    assert T.viterbo_check(T.Simplex(2.0, 3)).passed
    rec = T.viterbo_check(T.Box((1, 1)))
    assert rec.passed and rec.slack == pytest.approx(1.0)


def test_lattice_vectors():
    assert T.lattice_vectors(3, 1, positive=False) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert T.lattice_vectors(3, 3, positive=True) == [(1, 1, 1)]
    assert len(T.lattice_vectors(3, 4, positive=False)) == math.comb(6, 2)


# --------------------------------------------------------------------------- errors


def test_region_errors():
    with pytest.raises(T.RegionError):
        T.Box((1, 0))
    with pytest.raises(T.RegionError):
        T.Simplex(-1, 2)
    with pytest.raises(T.RegionError):
        T.OrthantOfBody(B.LinearImage(B.rotation(0.3), B.LpBall(2, 1)))
    with pytest.raises(T.RegionError):
        T.Graph2D(1, lambda x: x)  # increasing
    with pytest.raises(T.RegionError):
        T.Graph2D(1, lambda x: 0 * x)  # empty interior
    with pytest.raises(T.RegionError):
        T.Graph2D(1, lambda x: x - 2)  # negative
    with pytest.raises(T.RegionError):
        T.Graph2D(0, lambda x: 1 - x)


def test_operation_errors():
    with pytest.raises(T.RegionError):
        T.support_norm(T.Box((1, 2)), [1, -1])
    with pytest.raises(T.RegionError):
        T.support_norm(T.Box((1, 2)), [1, 1, 1])
    with pytest.raises(T.RegionError):
        T.min_inner(T.Box((1, 2)), [1, 1])
    with pytest.raises(T.RegionError):
        T.capacity_convex_toric(sqrt_graph(4))
    with pytest.raises(T.RegionError):
        T.gromov_width_concave(T.Box((1, 2)))
    with pytest.raises(T.RegionError):
        T.min_inner(sqrt_graph(4), [1, 0])


# --------------------------------------------------------------------------- properties


@pytest.mark.parametrize("seed", range(6))
def test_support_norm_against_grid(seed):
    gen = np.random.default_rng(seed)
    region = random_convex_region(gen, 2 + seed % 2)
    n = region.dim
    lo, hi = region_bbox(region)
    res = 2000 if n == 2 else 200
    member = lambda w: T.region_contains(region, w)  # noqa: E731
    for _ in range(3):
        v = gen.random(n)
        g = grid_support(member, (lo, 1.05 * hi), v, res, refine=40, center=np.zeros(n))
        assert abs(T.support_norm(region, v) - g) <= 1e-6 * (1 + np.linalg.norm(v))


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.1, 10))
def test_scale_homogeneity(seed, r):
    gen = np.random.default_rng(seed)
    region = random_convex_region(gen, int(gen.integers(1, 4)))
    v = gen.random(region.dim)
    assert abs(T.support_norm(T.Scale(r, region), v) - r * T.support_norm(region, v)) <= 1e-12 * max(
        1, r * T.support_norm(region, v))
    g = sqrt_graph(1 + 3 * gen.random())
    w = 0.1 + gen.random(2)
    assert abs(T.min_inner(T.Scale(r, g), w) - r * T.min_inner(g, w)) <= 1e-12 * max(1, r)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 5), min_size=3, max_size=3), st.lists(st.floats(0, 2), min_size=3, max_size=3))
def test_capacity_monotone_under_inclusion(u, extra):
    small = T.Box(tuple(u))
    big = T.Box(tuple(a + b for a, b in zip(u, extra)))
    assert T.capacity_convex_toric(small).value <= T.capacity_convex_toric(big).value


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 5), st.floats(0.5, 5), st.floats(1.0, 4.0))
def test_concave_routes_agree(a, b, k):
    g = T.Graph2D(a, lambda x: b * (1 - x / a) ** k)
    rep = T.gromov_width_concave(g, tol=1e-6)
    assert rep.verified
    lo, hi = T.capacity_bounds_concave(g)
    assert lo <= hi + 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_product_min_rule(seed):
    gen = np.random.default_rng(seed)
    factors = [random_convex_region(gen, int(gen.integers(1, 3)), depth=1) for _ in range(2)]
    rep = T.product_capacity(factors)
    assert rep.verified
    assert rep.value == pytest.approx(min(T.capacity_convex_toric(f).value for f in factors), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_viterbo_on_random_regions(seed):
    gen = np.random.default_rng(seed)
    assert T.viterbo_check(random_convex_region(gen, int(gen.integers(1, 4)))).passed


def test_table_graph_exact_at_nodes():
    g = T.Graph2D.from_table([0, 1, 2, 3], [3, 1.5, 0.5, 0])
    assert T.support_norm(g, [1, 1]) == 3.0
    assert T.min_inner(g, [1, 1]) == 2.5
    with pytest.raises(T.RegionError):
        T.Graph2D.from_table([0, 2, 1], [1, 1, 0])
