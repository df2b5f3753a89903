import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mergegram import (
    INF,
    DiagramPair,
    DimensionMismatch,
    Diagram,
    bottleneck,
    cloud_mergegram,
    cloud_persistence,
    diagonal_distance,
    hausdorff,
    linf_pair_distance,
)
from mergegram.perturb import jitter
from oracles import bottleneck_brute, hausdorff_brute

from conftest import LINE_A, LINE_B, random_cloud

# Brute force over all partial bijections of the two 9-pair mergegrams.
LINE_MG_BOTTLENECK = 0.5


class TestHausdorff:
    def test_identity(self):
        pts = np.random.default_rng(0).normal(size=(20, 3))
        assert hausdorff(pts, pts) == 0.0

    def test_singletons(self):
        assert hausdorff([0.0], [3.0]) == 3.0

    def test_extra_point(self):
        assert hausdorff([0, 10], [0, 4, 10]) == hausdorff_brute([[0], [10]], [[0], [4], [10]]) == 4.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hausdorff([[0, 0]], [[0, 0, 0]])

    @pytest.mark.parametrize("seed", range(10))
    def test_against_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=(15, 2)), rng.normal(size=(9, 2))
        assert math.isclose(hausdorff(a, b), hausdorff_brute(a.tolist(), b.tolist()), rel_tol=1e-12)

    def test_custom_metric(self):
        l1 = lambda p, q: float(np.abs(p - q).sum())  # noqa: E731
        assert hausdorff([[0, 0]], [[1, 1]], metric=l1) == 2.0

    def test_large_clouds_chunked(self):
        rng = np.random.default_rng(1)
        a = rng.uniform(size=(5000, 2))
        b = a + 0.001
        assert hausdorff(a, b) == pytest.approx(math.sqrt(2) * 0.001, rel=1e-6)


class TestPairDistances:
    def test_linf(self):
        assert linf_pair_distance((0, 1), (0, 1)) == 0
        assert linf_pair_distance((0, 1), (0.2, 1.5)) == 0.5
        assert linf_pair_distance(DiagramPair(1, INF), DiagramPair(3, INF)) == 2
        assert linf_pair_distance((1, INF), (1, 5)) == INF

    def test_diagonal(self):
        assert diagonal_distance((0, 1)) == 0.5
        eps = 1e-3
        assert diagonal_distance((2, 2 + eps)) == pytest.approx(eps / 2, rel=1e-12)
        assert diagonal_distance((2, INF)) == INF


def random_diagram(rng, max_points=7, n_inf=0):
    n = int(rng.integers(0, max_points - n_inf + 1))
    births = rng.uniform(0, 5, size=n)
    pairs = [(float(b), float(b + rng.uniform(0.01, 4))) for b in births]
    pairs += [(float(rng.uniform(0, 5)), INF) for _ in range(n_inf)]
    return Diagram(pairs)


class TestBottleneck:
    def test_identity(self):
        d = Diagram([(0, 1), (0.5, 2, 3), (1, INF)])
        assert bottleneck(d, d) == 0

    def test_against_empty(self):
        assert bottleneck([(0, 1)], []) == 0.5
        assert bottleneck([], []) == 0.0

    def test_infinite_counts_differ(self):
        assert bottleneck([(0, INF)], [(0, INF), (1, INF)]) == INF

    def test_infinite_pairs_sorted_matching(self):
        assert bottleneck([(0, INF), (5, INF)], [(4.5, INF), (0.25, INF)]) == 0.5

    def test_witness_clouds_brute_force(self):
        a, b = cloud_mergegram(LINE_A), cloud_mergegram(LINE_B)
        assert bottleneck_brute(a.expand(), b.expand()) == LINE_MG_BOTTLENECK
        assert bottleneck(a, b) == LINE_MG_BOTTLENECK

    def test_accepts_triples_and_pairs(self):
        assert bottleneck([(0, 1, 2)], [(0, 1), (0, 1)]) == 0

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n_inf = int(rng.integers(0, 2))
        d1, d2 = random_diagram(rng, n_inf=n_inf), random_diagram(rng, n_inf=n_inf)
        got = bottleneck(d1, d2)
        want = bottleneck_brute(d1.expand(), d2.expand())
        assert abs(got - want) <= 1e-12

    def test_brute_force_on_shared_values(self):
        # Integer scales produce many exact ties in the candidate set.
        rng = np.random.default_rng(11)
        for _ in range(30):
            d1 = Diagram([(b, b + int(rng.integers(1, 4))) for b in rng.integers(0, 4, size=int(rng.integers(0, 6)))])
            d2 = Diagram([(b, b + int(rng.integers(1, 4))) for b in rng.integers(0, 4, size=int(rng.integers(0, 6)))])
            assert bottleneck(d1, d2) == bottleneck_brute(d1.expand(), d2.expand())


@st.composite
def small_diagrams(draw):
    pts = draw(
        st.lists(
            st.tuples(st.floats(0, 10), st.floats(0.001, 10)), max_size=20
        )
    )
    return Diagram([(b, b + d) for b, d in pts])


@settings(max_examples=60, deadline=None)
@given(small_diagrams(), small_diagrams(), small_diagrams())
def test_metric_axioms(a, b, c):
    assert bottleneck(a, a) == 0
    ab, ba = bottleneck(a, b), bottleneck(b, a)
    assert ab == ba
    assert ab <= bottleneck(a, c) + bottleneck(c, b) + 1e-9


@pytest.mark.parametrize("seed", range(25))
def test_stability_under_jitter(seed):
    rng = np.random.default_rng(seed)
    pts = random_cloud(rng, n_max=60, n_min=2)
    moved = jitter(pts, float(rng.uniform(0, 1)), seed=seed).points
    hd = hausdorff(pts, moved)
    assert bottleneck(cloud_mergegram(pts), cloud_mergegram(moved)) <= hd + 1e-9
    assert bottleneck(cloud_persistence(pts), cloud_persistence(moved)) <= hd + 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_stability_for_different_sizes(seed):
    # The inequality holds for any pair of clouds, including different sizes.
    rng = np.random.default_rng(1000 + seed)
    a = rng.uniform(0, 10, size=(int(rng.integers(3, 30)), 2))
    b = np.vstack([a, a[: int(rng.integers(1, 4))] + rng.uniform(-0.3, 0.3, size=(1, 2))])
    hd = hausdorff(a, b)
    assert bottleneck(cloud_mergegram(a), cloud_mergegram(b)) <= hd + 1e-9
