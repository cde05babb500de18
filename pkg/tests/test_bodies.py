import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from symcap import bodies as B
from symcap.numerics import RngStream
from symcap.oracles import grid_support, mc_check
from symcap.sampling import body_bbox, hanner_specs, random_body, random_invertible

INF = math.inf
seeds = st.integers(0, 2 ** 32 - 1)


def tree(seed, unconditional=False, max_dim=6, depth=4):
    gen = np.random.default_rng(seed)
    return random_body(gen, int(gen.integers(1, max_dim + 1)), depth=depth, unconditional=unconditional), gen


# --------------------------------------------------------------------------- examples


def test_gauge_examples():
    assert B.gauge(B.LpBall(2, 1), [0.5, 0.5]) == pytest.approx(1.0)
    assert B.gauge(B.PProduct(2, B.Segment(1), B.Segment(1)), [3, 4]) == pytest.approx(5.0)
    assert B.gauge(B.LpBall(4, 3), np.zeros(4)) == 0.0


def test_contains_examples():
    assert B.contains(B.LpBall(3, INF), [1, 1, 1])
    assert not B.contains(B.LpBall(2, 1), [0.8, 0.8])
    assert B.contains(B.hanner([1, INF]), np.zeros(3))


def test_polar_examples():
    assert B.polar(B.LpBall(4, INF)) == B.LpBall(4, 1)
    assert B.polar(B.LpBall(3, 1.5)) == B.LpBall(3, 3.0)
    assert B.polar(B.Segment(2.0)) == B.Segment(0.5)
    assert B.polar(B.Cartesian(B.Segment(), B.Segment())) == B.PProduct(1.0, B.Segment(), B.Segment())


def test_support_examples():
    assert B.support(B.LpBall(2, INF), [1, 1]) == pytest.approx(2.0)
    assert B.support(B.LpBall(2, 2), [3, 4]) == pytest.approx(5.0)


def test_volume_examples():
    assert B.volume(B.LpBall(3, 1)) == pytest.approx(4 / 3, rel=1e-15)
    assert B.volume(B.LpBall(2, 2)) == pytest.approx(math.pi, rel=1e-15)
    assert B.volume(B.PProduct(1, B.Segment(1), B.Segment(1))) == pytest.approx(2.0, rel=1e-15)
    assert B.volume(B.LpBall(5, INF)) == 32.0


@pytest.mark.parametrize("p", [1, 1.3, 2, 5, INF])
def test_mahler_one_dimensional(p):
    assert B.mahler(B.LpBall(1, p)) == pytest.approx(4.0, rel=1e-14)


def test_mahler_cross_polytope_plane():
    assert B.mahler(B.LpBall(2, 1)) == pytest.approx(8.0, rel=1e-15)


def test_hanner_examples():
    x = np.random.default_rng(0).standard_normal((50, 3))
    assert np.allclose(B.gauge(B.hanner([INF, INF]), x), np.abs(x).max(axis=1))
    assert np.allclose(B.gauge(B.hanner([1, 1]), x), B.gauge(B.LpBall(3, 1), x))
    for spec in hanner_specs(4):
        assert B.mahler(B.hanner(spec)) == pytest.approx(4 ** 4 / 24, rel=1e-12)
    assert len(hanner_specs(4)) == 8
    with pytest.raises(ValueError):
        B.hanner([2])


def test_unconditional_examples():
    assert B.is_coordinate_unconditional(B.LpBall(3, 2))
    assert not B.is_coordinate_unconditional(B.LinearImage(B.rotation(math.pi / 4), B.LpBall(2, 1)))
    assert B.is_coordinate_unconditional(B.diagonal([1, 2], B.LpBall(2, 1)))


# --------------------------------------------------------------------------- errors


def test_construction_errors():
    with pytest.raises(ValueError):
        B.Segment(0)
    with pytest.raises(ValueError):
        B.LpBall(0, 2)
    with pytest.raises(ValueError):
        B.LpBall(2, 0.5)
    with pytest.raises(ValueError):
        B.PProduct(0.9, B.Segment(), B.Segment())
    with pytest.raises(ValueError):
        B.LinearImage(np.array([[1.0, 2.0], [2.0, 4.0]]), B.LpBall(2, 2))
    with pytest.raises(ValueError):
        B.LinearImage(np.eye(3), B.LpBall(2, 2))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        B.gauge(B.LpBall(2, 2), [1, 2, 3])
    with pytest.raises(ValueError):
        B.support(B.LpBall(2, 2), [1])


def test_linear_image_is_immutable_and_hashable():
    m = np.eye(2)
    body = B.LinearImage(m, B.LpBall(2, 2))
    m[0, 0] = 5.0
    assert body.matrix[0, 0] == 1.0
    with pytest.raises(ValueError):
        body.matrix[0, 0] = 3.0
    assert body == B.LinearImage(np.eye(2), B.LpBall(2, 2))
    assert hash(body) == hash(B.LinearImage(np.eye(2), B.LpBall(2, 2)))


# --------------------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(-5, 5))
@example(seed=4146, t=7.677841798542827e-214)  # squared norms underflow here
def test_gauge_homogeneous(seed, t):
    body, gen = tree(seed)
    x = gen.standard_normal((20, body.dim))
    assert np.allclose(B.gauge(body, t * x), abs(t) * B.gauge(body, x), rtol=1e-12, atol=1e-300)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_support_gauge_polarity(seed):
    body, gen = tree(seed)
    v = gen.standard_normal((50, body.dim))
    x = gen.standard_normal((50, body.dim))
    h = B.support(body, v)
    g = B.gauge(body, x)
    assert np.all(h[:, None] * g[None, :] - v @ x.T >= -1e-9 * (1 + np.abs(v @ x.T)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_double_polar_involution(seed):
    body, gen = tree(seed)
    x = gen.standard_normal((100, body.dim))
    a, b = B.gauge(body, x), B.gauge(B.polar(B.polar(body)), x)
    assert np.max(np.abs(a - b) / np.maximum(1.0, a)) <= 1e-10


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("p", [1, 1.5, 2, 3, INF])
def test_volume_of_iterated_segment_products(n, p):
    iterated = B.p_product(p, *[B.Segment(1.0)] * n) if n > 1 else B.Segment(1.0)
    assert B.volume(iterated) == pytest.approx(B.volume(B.LpBall(n, p)), rel=1e-12)
    x = np.random.default_rng(n).standard_normal((30, n))
    assert np.allclose(B.gauge(iterated, x), B.gauge(B.LpBall(n, p), x), rtol=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_support_against_grid(seed):
    gen = np.random.default_rng(100 + seed)
    body = random_body(gen, int(gen.integers(1, 4)))
    hi = body_bbox(body)[1]
    member = lambda x: B.gauge(body, x) <= 1.0  # noqa: E731
    for _ in range(3):
        v = gen.standard_normal(body.dim)
        g = grid_support(member, (-1.05 * hi, 1.05 * hi), v, 64, refine=20, center=np.zeros(body.dim))
        assert abs(float(B.support(body, v)) - g) <= 1e-6


def test_volume_against_monte_carlo():
    gen = np.random.default_rng(11)
    for k in range(20):
        body = random_body(gen, int(gen.integers(1, 6)), unconditional=bool(k % 2))
        ok, ests = mc_check(B.volume(body), lambda x, b=body: B.gauge(b, x) <= 1.0, body_bbox(body),
                            1_000_000, RngStream(20200820, k))
        assert ok, (body, B.volume(body), ests)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_mahler_affine_invariance(seed):
    body, gen = tree(seed, max_dim=5)
    image = B.LinearImage(random_invertible(gen, body.dim), body)
    assert B.mahler(image) == pytest.approx(B.mahler(body), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_polar_volume_bound_for_unconditional(seed):
    body, _ = tree(seed, unconditional=True, max_dim=5)
    n = body.dim
    assert math.factorial(n) * B.mahler(body) >= 4.0 ** n - 1e-9


def test_bounding_box_is_tight():
    body = B.diagonal([1, 2], B.LpBall(2, 1))
    assert np.allclose(B.bounding_box(body), [1, 2])
    assert B.contains(body, [1, 0]) and B.contains(body, [0, 2])
