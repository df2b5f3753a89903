"""Hausdorff distance between clouds and bottleneck distance between diagrams."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import INF, Diagram, DiagramPair, as_cloud
from .errors import DimensionMismatch
from .linkage import Metric

_CHUNK = 2048


def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    worst = 0.0
    for start in range(0, len(a), _CHUNK):
        block = a[start : start + _CHUNK]
        diff = block[:, None, :] - b[None, :, :]
        nearest = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)).min(axis=1)
        worst = max(worst, float(nearest.max()))
    return worst


def hausdorff(a, b, metric: Metric | None = None) -> float:
    """Symmetric Hausdorff distance ``max(sup_a d(a, B), sup_b d(b, A))``."""
    a, b = as_cloud(a), as_cloud(b)
    if a.dim != b.dim:
        raise DimensionMismatch(f"clouds have dimensions {a.dim} and {b.dim}")
    pa, pb = a.points, b.points
    if metric is None:
        return max(_directed_hausdorff(pa, pb), _directed_hausdorff(pb, pa))
    d = np.array([[float(metric(p, q)) for q in pb] for p in pa])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _bd(p) -> tuple[float, float]:
    if isinstance(p, DiagramPair):
        return p.birth, p.death
    return float(p[0]), float(p[1])


def linf_pair_distance(p, q) -> float:
    """L-infinity distance; two infinite deaths cancel, one alone gives ``inf``."""
    (b1, d1), (b2, d2) = _bd(p), _bd(q)
    if math.isinf(d1) or math.isinf(d2):
        death_term = 0.0 if d1 == d2 else INF
    else:
        death_term = abs(d1 - d2)
    return max(abs(b1 - b2), death_term)


def diagonal_distance(p) -> float:
    """L-infinity distance to the nearest diagonal point ``(s, s)``."""
    b, d = _bd(p)
    return INF if math.isinf(d) else (d - b) / 2.0


def _expand(diagram) -> list[tuple[float, float]]:
    if isinstance(diagram, Diagram):
        return diagram.expand()
    out = []
    for item in diagram:
        if isinstance(item, DiagramPair):
            out.extend([item.key] * item.multiplicity)
        elif len(item) == 3:
            out.extend([(float(item[0]), float(item[1]))] * int(item[2]))
        else:
            out.append((float(item[0]), float(item[1])))
    return out


def _has_perfect_matching(close: np.ndarray, diag_a: np.ndarray, diag_b: np.ndarray, delta: float) -> bool:
    """Perfect matching test on the diagonal-augmented bipartite graph.

    Rows are the ``n`` points of A followed by ``m`` diagonal copies of B's
    points; columns are the ``m`` points of B followed by ``n`` diagonal
    copies of A's points.
    """
    n, m = close.shape
    size = n + m
    top = np.zeros((n, size), dtype=bool)
    top[:, :m] = close <= delta
    top[np.arange(n), m + np.arange(n)] = diag_a <= delta
    bottom = np.zeros((m, size), dtype=bool)
    bottom[np.arange(m), np.arange(m)] = diag_b <= delta
    bottom[:, m:] = True
    graph = csr_matrix(np.vstack([top, bottom]))
    matching = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(matching >= 0))


def _finite_bottleneck(a: list[tuple[float, float]], b: list[tuple[float, float]]) -> float:
    if not a and not b:
        return 0.0
    pa = np.array(a, dtype=float).reshape(-1, 2)
    pb = np.array(b, dtype=float).reshape(-1, 2)
    close = np.maximum(
        np.abs(pa[:, None, 0] - pb[None, :, 0]), np.abs(pa[:, None, 1] - pb[None, :, 1])
    )
    diag_a = (pa[:, 1] - pa[:, 0]) / 2.0
    diag_b = (pb[:, 1] - pb[:, 0]) / 2.0
    candidates = np.unique(np.concatenate([[0.0], close.ravel(), diag_a, diag_b]))
    lo, hi = 0, len(candidates) - 1
    # The largest candidate is always feasible: every point can go to the diagonal.
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(close, diag_a, diag_b, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck(d1: Diagram | Iterable, d2: Diagram | Iterable) -> float:
    """Exact bottleneck distance between two diagrams.

    Infinite-death pairs are matched among themselves by sorted births;
    differing counts give ``inf``. Finite pairs go through a binary search over
    every candidate distance with a bipartite perfect-matching test.
    """
    a, b = _expand(d1), _expand(d2)
    a_inf = sorted(p[0] for p in a if math.isinf(p[1]))
    b_inf = sorted(p[0] for p in b if math.isinf(p[1]))
    if len(a_inf) != len(b_inf):
        return INF
    inf_part = max((abs(x - y) for x, y in zip(a_inf, b_inf)), default=0.0)
    fin_part = _finite_bottleneck(
        [p for p in a if math.isfinite(p[1])], [p for p in b if math.isfinite(p[1])]
    )
    return max(inf_part, fin_part)
