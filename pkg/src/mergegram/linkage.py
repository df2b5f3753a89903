"""Minimum spanning trees and single-linkage dendrograms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import INF, as_cloud, scales_equal
from .errors import InvalidMetric

Metric = Callable[[np.ndarray, np.ndarray], float]


class ScaleConvention(enum.Enum):
    """How an MST edge length becomes a merge scale.

    HALF: clusters merge when disks of radius s around points overlap, so
    the scale is half the edge length. FULL: points within distance s merge.
    """

    HALF = "half"
    FULL = "full"

    def scale(self, length: float) -> float:
        return length / 2.0 if self is ScaleConvention.HALF else float(length)


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


# ---------------------------------------------------------------------------
# distances


def _euclidean_matrix(points: np.ndarray) -> np.ndarray:
    out = np.empty((len(points), len(points)))
    for i in range(len(points)):
        out[i] = _euclidean_row(points, i)
    return out


def _euclidean_row(points: np.ndarray, i: int) -> np.ndarray:
    # Shared by the dense and the Prim path so both see bit-identical lengths.
    diff = points - points[i]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def check_distance_matrix(matrix) -> np.ndarray:
    d = np.array(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise InvalidMetric(f"distance matrix must be square and non-empty, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InvalidMetric("distance matrix has non-finite entries")
    if np.any(d < 0):
        raise InvalidMetric("distance matrix has negative entries")
    if np.any(np.diag(d) != 0):
        raise InvalidMetric("distance matrix must have a zero diagonal")
    if not np.array_equal(d, d.T):
        raise InvalidMetric("distance matrix must be symmetric")
    return d


def pairwise_distances(cloud, metric: Metric | str | None = None) -> np.ndarray:
    """Symmetric distance matrix with zero diagonal.

    ``metric`` is ``None`` (Euclidean), a callable ``metric(p, q) -> float``,
    or ``"precomputed"`` in which case ``cloud`` is a distance matrix that is
    validated and returned unchanged.
    """
    if isinstance(metric, str):
        if metric != "precomputed":
            raise InvalidMetric(f"unknown metric {metric!r}")
        return check_distance_matrix(cloud)
    pts = as_cloud(cloud).points
    if metric is None:
        return _euclidean_matrix(pts)
    n = len(pts)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = metric(pts[i], pts[j])
            try:
                v = float(v)
            except (TypeError, ValueError):
                raise InvalidMetric(f"metric returned non-numeric value {v!r}") from None
            if not math.isfinite(v) or v < 0:
                raise InvalidMetric(f"metric returned {v} for points {i}, {j}")
            out[i, j] = out[j, i] = v
    return out


# ---------------------------------------------------------------------------
# spanning trees


@dataclass(frozen=True)
class SpanningTree:
    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a spanning tree needs at least one vertex")
        if len(self.edges) != self.n - 1:
            raise ValueError(f"{self.n} vertices need {self.n - 1} edges, got {len(self.edges)}")
        ds = DisjointSet(self.n)
        for a, b, length in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range")
            if not math.isfinite(length) or length < 0:
                raise ValueError(f"edge length must be finite and non-negative, got {length}")
            if not ds.union(a, b):
                raise ValueError("edges contain a cycle")

    @property
    def total_length(self) -> float:
        return math.fsum(e[2] for e in self.edges)

    def sorted_edges(self) -> list[tuple[int, int, float]]:
        """Ascending length; ties broken by (min index, max index)."""
        norm = [(min(a, b), max(a, b), length) for a, b, length in self.edges]
        return sorted(norm, key=lambda e: (e[2], e[0], e[1]))


def build_mst(distances) -> SpanningTree:
    """Kruskal over all ``n(n-1)/2`` edges of a dense distance matrix."""
    d = np.asarray(distances, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise InvalidMetric(f"distance matrix must be square and non-empty, got shape {d.shape}")
    if not np.array_equal(d, d.T):
        raise InvalidMetric("distance matrix must be symmetric")
    n = d.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    lengths = d[iu, ju]
    order = np.lexsort((ju, iu, lengths))
    ds = DisjointSet(n)
    edges = []
    for k in order:
        a, b = int(iu[k]), int(ju[k])
        if ds.union(a, b):
            edges.append((a, b, float(lengths[k])))
            if len(edges) == n - 1:
                break
    return SpanningTree(n, tuple(edges))


def build_mst_euclidean(cloud) -> SpanningTree:
    """Prim's algorithm on Euclidean distances computed row by row.

    O(n^2) time and O(n) memory, so large clouds never materialise the
    dense matrix. May pick a different tree than :func:`build_mst` when edge
    lengths tie; the resulting dendrogram partitions are the same.
    """
    pts = as_cloud(cloud).points
    n = len(pts)
    if n == 1:
        return SpanningTree(1, ())
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    edges = []
    current = 0
    in_tree[0] = True
    for _ in range(n - 1):
        row = _euclidean_row(pts, current)
        closer = (row < best) & ~in_tree
        best[closer] = row[closer]
        parent[closer] = current
        masked = np.where(in_tree, np.inf, best)
        nxt = int(np.argmin(masked))
        edges.append((int(parent[nxt]), nxt, float(best[nxt])))
        in_tree[nxt] = True
        current = nxt
    return SpanningTree(n, tuple(edges))


def cloud_mst(cloud, metric: Metric | str | None = None, method: str = "auto") -> SpanningTree:
    """MST of a cloud (or of a precomputed matrix when ``metric="precomputed"``).

    ``method`` is ``"kruskal"``, ``"prim"`` (Euclidean only) or ``"auto"``,
    which takes Prim for Euclidean clouds above 1500 points.
    """
    if method not in ("auto", "kruskal", "prim"):
        raise ValueError(f"unknown MST method {method!r}")
    euclidean = metric is None
    if method == "prim" or (method == "auto" and euclidean and len(as_cloud(cloud)) > 1500):
        if not euclidean:
            raise ValueError("the Prim path supports only the Euclidean metric")
        return build_mst_euclidean(cloud)
    return build_mst(pairwise_distances(cloud, metric))


# ---------------------------------------------------------------------------
# dendrograms


@dataclass(frozen=True)
class ClusterNode:
    id: int
    members: frozenset
    birth: float
    death: float
    children: tuple[int, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree of clusters; node ``i`` lives on ``[birth, death)``.

    Leaves are the clusters at scale 0 (singletons unless points coincide).
    The root dies at infinity.
    """

    nodes: tuple[ClusterNode, ...]
    root: int

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, node_id: int) -> ClusterNode:
        return self.nodes[node_id]

    @property
    def leaves(self) -> list[ClusterNode]:
        return [nd for nd in self.nodes if nd.is_leaf]

    @property
    def n_points(self) -> int:
        return len(self.nodes[self.root].members)

    def merge_scales(self) -> list[float]:
        return sorted({nd.birth for nd in self.nodes if not nd.is_leaf})

    def partition(self, scale: float) -> set[frozenset]:
        """Clusters alive at ``scale``."""
        return {nd.members for nd in self.nodes if nd.birth <= scale < nd.death}

    def validate(self) -> None:
        """Raise ``AssertionError`` if any structural invariant fails."""
        nodes = self.nodes
        root = nodes[self.root]
        assert math.isinf(root.death), "root must live forever"
        parent_of: dict[int, int] = {}
        for nd in nodes:
            assert nd.birth < nd.death, f"node {nd.id} has empty life"
            if nd.is_leaf:
                assert nd.birth == 0, f"leaf {nd.id} born at {nd.birth}"
                continue
            assert len(nd.children) >= 2, f"node {nd.id} has a single child"
            union: set = set()
            for c in nd.children:
                child = nodes[c]
                assert c not in parent_of, f"node {c} has two parents"
                parent_of[c] = nd.id
                assert child.death == nd.birth, f"child {c} dies at {child.death}, parent born {nd.birth}"
                assert child.birth < nd.birth
                assert not (union & child.members), "children overlap"
                union |= child.members
            assert union == nd.members, f"node {nd.id} members differ from its children"
        assert set(parent_of) == {nd.id for nd in nodes} - {self.root}, "tree is not connected"

    def canonical_form(self, node_id: int | None = None):
        """Order-free nested tuple ``(birth, death, size, children...)``."""
        node_id = self.root if node_id is None else node_id
        stack = [(node_id, False)]
        done: dict[int, tuple] = {}
        while stack:
            i, expanded = stack.pop()
            nd = self.nodes[i]
            if expanded or nd.is_leaf:
                kids = tuple(sorted(done.pop(c) for c in nd.children))
                done[i] = (nd.birth, nd.death, len(nd.members), kids)
            else:
                stack.append((i, True))
                stack.extend((c, False) for c in nd.children)
        return done[node_id]

    def to_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v

        return {
            "root": self.root,
            "nodes": [
                {
                    "id": nd.id,
                    "birth": enc(nd.birth),
                    "death": enc(nd.death),
                    "children": list(nd.children),
                    "members": sorted(nd.members),
                }
                for nd in self.nodes
            ],
        }


def _group_edges(edges: Sequence[tuple[int, int, float]], convention: ScaleConvention):
    groups: list[tuple[float, list[tuple[int, int]]]] = []
    for a, b, length in edges:
        s = convention.scale(length)
        if groups and scales_equal(groups[-1][0], s):
            groups[-1][1].append((a, b))
        else:
            groups.append((s, [(a, b)]))
    return groups


def single_linkage(tree: SpanningTree, convention: ScaleConvention = ScaleConvention.HALF) -> Dendrogram:
    """Single-linkage dendrogram from an MST.

    Edges whose merge scales agree within tolerance are applied together,
    giving one k-way merge per connected group. The merge scale of a group
    is the smallest scale in it. Merges at scale 0 (coincident points) are
    folded into the leaves.
    """
    convention = ScaleConvention(convention)
    n = tree.n
    groups = _group_edges(tree.sorted_edges(), convention)

    ds = DisjointSet(n)
    if groups and scales_equal(groups[0][0], 0.0):
        for a, b in groups.pop(0)[1]:
            ds.union(a, b)

    members: list[set] = []
    births: list[float] = []
    deaths: list[float] = []
    children: list[tuple[int, ...]] = []
    node_of_root: dict[int, int] = {}
    leaf_members: dict[int, set] = {}
    for i in range(n):
        leaf_members.setdefault(ds.find(i), set()).add(i)
    for r in sorted(leaf_members, key=lambda r: min(leaf_members[r])):
        node_of_root[r] = len(members)
        members.append(leaf_members[r])
        births.append(0.0)
        deaths.append(INF)
        children.append(())

    for scale, group in groups:
        old_roots = {ds.find(x) for pair in group for x in pair}
        for a, b in group:
            ds.union(a, b)
        merged: dict[int, list[int]] = {}
        for r in old_roots:
            merged.setdefault(ds.find(r), []).append(r)
        for new_root, roots in sorted(merged.items(), key=lambda kv: min(node_of_root[r] for r in kv[1])):
            kids = tuple(sorted(node_of_root.pop(r) for r in roots))
            union: set = set()
            for c in kids:
                deaths[c] = scale
                union |= members[c]
            node_of_root[new_root] = len(members)
            members.append(union)
            births.append(scale)
            deaths.append(INF)
            children.append(kids)

    nodes = tuple(
        ClusterNode(i, frozenset(members[i]), births[i], deaths[i], children[i]) for i in range(len(members))
    )
    return Dendrogram(nodes, len(nodes) - 1)
