import numpy as np
import pytest

from mergegram import (
    INF,
    DanglingBirth,
    LeafDeficit,
    Mergegram,
    NotGeneralPosition,
    ReconstructionError,
    cloud_mst,
    is_general_position,
    mergegram,
    reconstruct_dendrogram,
    single_linkage,
)

from conftest import random_cloud
from test_invariants import LINE_MG, PATH5_MG


class TestGeneralPosition:
    def test_line_example(self):
        assert is_general_position(LINE_MG)

    def test_path_space(self):
        assert not is_general_position(PATH5_MG)

    def test_single_point(self):
        assert is_general_position(Mergegram([(0, INF)]))

    def test_near_equal_deaths_collide(self):
        mg = Mergegram([(0, 1, 2), (0, 1 + 1e-12), (1, INF)])
        assert not is_general_position(mg)


class TestReconstruct:
    def test_line_example_structure(self):
        den = reconstruct_dendrogram(LINE_MG)
        den.validate()
        assert len(den) == 9
        assert den.nodes[den.root].birth == 2.0
        internal = sorted((nd.birth, len(nd.members)) for nd in den.nodes if not nd.is_leaf)
        assert internal == [(0.5, 2), (1.0, 3), (1.5, 2), (2.0, 5)]
        root = den.nodes[den.root]
        assert sorted(den.nodes[c].birth for c in root.children) == [1.0, 1.5]
        assert mergegram(den) == LINE_MG

    def test_leaves_numbered_in_order_of_use(self):
        den = reconstruct_dendrogram(LINE_MG)
        assert sorted(next(iter(nd.members)) for nd in den.leaves) == list(range(5))
        assert den.nodes[0].members == frozenset({0})

    def test_single_leaf(self):
        den = reconstruct_dendrogram(Mergegram([(0, INF)]))
        assert len(den) == 1
        assert den.nodes[0].death == INF

    def test_two_leaves(self):
        den = reconstruct_dendrogram(Mergegram([(0, 1, 2), (1, INF)]))
        den.validate()
        assert len(den) == 3
        root = den.nodes[den.root]
        assert root.birth == 1.0 and len(root.children) == 2
        assert mergegram(den) == Mergegram([(0, 1, 2), (1, INF)])

    def test_rejects_path_space(self):
        with pytest.raises(NotGeneralPosition) as info:
            reconstruct_dendrogram(PATH5_MG)
        assert info.value.scale == 1.0

    def test_dangling_birth(self):
        with pytest.raises(DanglingBirth):
            reconstruct_dendrogram(Mergegram([(0, 1), (0.7, 1), (1, INF)]))

    def test_leaf_deficit(self):
        with pytest.raises(LeafDeficit):
            reconstruct_dendrogram(Mergegram([(0, 1, 2), (0, 2, 2), (2, INF)]))

    def test_plain_diagram_needs_one_infinite_pair(self):
        with pytest.raises(ReconstructionError):
            reconstruct_dendrogram([(0, 1), (0, 1)])

    @pytest.mark.parametrize("seed", range(40))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        pts = random_cloud(rng, n_max=60)
        original = single_linkage(cloud_mst(pts))
        mg = mergegram(original)
        assert is_general_position(mg)
        rebuilt = reconstruct_dendrogram(mg)
        rebuilt.validate()
        assert mergegram(rebuilt) == mg
        assert rebuilt.canonical_form() == original.canonical_form()

    def test_canonical_form_distinguishes_shapes(self):
        a = reconstruct_dendrogram(LINE_MG)
        b = single_linkage(cloud_mst([0, 4, 6, 9, 10]))
        assert a.canonical_form() != b.canonical_form()
