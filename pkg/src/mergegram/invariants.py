"""Isometry invariants of a cloud: mergegram, 0D persistence and NN(k)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import INF, Mergegram, PersistenceDiagram, as_cloud, group_scales
from .errors import CloudTooSmall, NegativeMultiplicity
from .linkage import (
    Dendrogram,
    Metric,
    ScaleConvention,
    SpanningTree,
    cloud_mst,
    pairwise_distances,
    single_linkage,
)


def mergegram(dendrogram: Dendrogram) -> Mergegram:
    """One ``(birth, death)`` pair per node of the dendrogram."""
    return Mergegram.from_lives((nd.birth, nd.death) for nd in dendrogram.nodes)


def persistence0d_from_mst(
    tree: SpanningTree, convention: ScaleConvention = ScaleConvention.HALF
) -> PersistenceDiagram:
    convention = ScaleConvention(convention)
    lives = [(0.0, convention.scale(length)) for _, _, length in tree.edges]
    lives.append((0.0, INF))
    return PersistenceDiagram.from_lives(lives)


def persistence0d_from_mergegram(mg: Mergegram) -> PersistenceDiagram:
    """0D persistence as deaths minus births, counted per scale.

    Scales are bucketed with the shared tolerance; each bucket reports its
    smallest death value. Zero-scale births are ignored.
    """
    deaths: Counter = Counter()
    births: Counter = Counter()
    n_inf = 0
    for p in mg.pairs:
        if math.isinf(p.death):
            n_inf += p.multiplicity
        else:
            deaths[p.death] += p.multiplicity
        if p.birth > 0:
            births[p.birth] += p.multiplicity

    lives = []
    for bucket in group_scales(set(deaths) | set(births)):
        n_deaths = sum(deaths[v] for v in bucket)
        n_births = sum(births[v] for v in bucket)
        if n_births > n_deaths:
            raise NegativeMultiplicity(
                f"scale {bucket[0]} has {n_births} births but only {n_deaths} deaths"
            )
        if n_deaths > n_births:
            value = min(v for v in bucket if deaths[v])
            lives.extend([(0.0, value)] * (n_deaths - n_births))
    lives.extend([(0.0, INF)] * n_inf)
    return PersistenceDiagram.from_lives(lives)


@dataclass(frozen=True)
class NnDistanceSet:
    """Multiset of per-point sorted distances to the k nearest other points."""

    k: int
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        rows = tuple(tuple(float(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != self.k:
                raise ValueError(f"every row needs {self.k} entries, got {len(r)}")
            if any(a > b for a, b in zip(r, r[1:])):
                raise ValueError(f"row {r} is not ascending")
        object.__setattr__(self, "rows", tuple(sorted(rows)))

    def __len__(self) -> int:
        return len(self.rows)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(len(self.rows), self.k)


def nn_distances(cloud, k: int, metric: Metric | None = None) -> NnDistanceSet:
    """NN(k): for each point, its ``k`` smallest distances to the other points.

    Coincident points count as neighbours at distance 0.
    """
    cloud = as_cloud(cloud)
    if k < 1:
        raise ValueError("k must be positive")
    n = len(cloud)
    if n <= k:
        raise CloudTooSmall(f"NN({k}) needs at least {k + 1} points, got {n}")
    d = pairwise_distances(cloud, metric)
    np.fill_diagonal(d, np.inf)
    nearest = np.sort(d, axis=1, kind="stable")[:, :k]
    return NnDistanceSet(k, tuple(tuple(row) for row in nearest.tolist()))


def cloud_mergegram(
    cloud, convention: ScaleConvention = ScaleConvention.HALF, metric: Metric | str | None = None
) -> Mergegram:
    return mergegram(single_linkage(cloud_mst(cloud, metric), convention))


def cloud_persistence(
    cloud, convention: ScaleConvention = ScaleConvention.HALF, metric: Metric | str | None = None
) -> PersistenceDiagram:
    return persistence0d_from_mst(cloud_mst(cloud, metric), convention)
