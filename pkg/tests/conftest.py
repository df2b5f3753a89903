from __future__ import annotations

import contextlib

import numpy as np
import pytest

from mergegram import Dendrogram, ClusterNode, INF

LINE_A = [0.0, 1.0, 3.0, 7.0, 10.0]
LINE_B = [0.0, 4.0, 6.0, 9.0, 10.0]

# Five-point space {a, b, c, p, q} with the shortest-path metric of the path
# graph a-b (3), b-c (1), c-p (2), p-q (1); merge scales are distances here.
PATH5_LABELS = ("a", "b", "c", "p", "q")
PATH5_EDGES = [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 2.0), (3, 4, 1.0)]


def shortest_path_matrix(n, edges):
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for a, b, w in edges:
        d[a, b] = d[b, a] = min(d[a, b], w)
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


@pytest.fixture
def path5_matrix():
    return shortest_path_matrix(5, PATH5_EDGES)


@pytest.fixture
def three_leaf_dendrogram():
    nodes = (
        ClusterNode(0, frozenset({0}), 0.0, 1.0),
        ClusterNode(1, frozenset({1}), 0.0, 1.0),
        ClusterNode(2, frozenset({2}), 0.0, 2.0),
        ClusterNode(3, frozenset({0, 1}), 1.0, 2.0, (0, 1)),
        ClusterNode(4, frozenset({0, 1, 2}), 2.0, INF, (2, 3)),
    )
    return Dendrogram(nodes, 4)


def random_cloud(rng, n_max=50, dim=None, n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    dim = int(rng.integers(1, 4)) if dim is None else dim
    return rng.uniform(0.0, 10.0, size=(n, dim))


# ---------------------------------------------------------------------------
# acceptance reporting

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def record(label: str, detail: str = ""):
        note = {"detail": detail}
        try:
            yield note
        except BaseException:
            _RESULTS.append((label, False, note["detail"]))
            raise
        _RESULTS.append((label, True, note["detail"]))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _RESULTS:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
