"""Value types shared across the package: clouds, scales and diagrams.

Scales are plain floats, ``math.inf`` standing for an infinite death.
Diagrams are immutable multisets of ``(birth, death)`` pairs whose
multiplicity is stored explicitly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionMismatch

INF = math.inf

REL_TOL = 1e-9
ABS_TOL = 1e-12


def scales_equal(a: float, b: float) -> bool:
    """Tolerant scale comparison (relative 1e-9, absolute 1e-12 near zero)."""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL)


def group_scales(values: Iterable[float]) -> list[list[float]]:
    """Bucket ascending values; each bucket is anchored at its smallest member.

    Anchoring (rather than chaining neighbours) keeps a long run of nearly
    equal values from collapsing into a single bucket.
    """
    groups: list[list[float]] = []
    for v in sorted(values):
        if groups and scales_equal(groups[-1][0], v):
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


@dataclass(frozen=True, order=True)
class DiagramPair:
    birth: float
    death: float
    multiplicity: int = 1

    def __post_init__(self):
        birth, death = float(self.birth), float(self.death)
        object.__setattr__(self, "birth", birth)
        object.__setattr__(self, "death", death)
        if not math.isfinite(birth) or birth < 0:
            raise ValueError(f"birth must be finite and non-negative, got {birth}")
        if math.isnan(death):
            raise ValueError("death must not be NaN")
        if not birth < death:
            raise ValueError(f"pair needs birth < death, got ({birth}, {death})")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ValueError(f"multiplicity must be a positive integer, got {self.multiplicity}")
        object.__setattr__(self, "multiplicity", int(self.multiplicity))

    @property
    def key(self) -> tuple[float, float]:
        return (self.birth, self.death)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


def _as_pair(item) -> DiagramPair:
    if isinstance(item, DiagramPair):
        return item
    return DiagramPair(*item)


class Diagram:
    """Multiset of diagram pairs.

    Construction accepts ``DiagramPair`` objects or ``(birth, death[, mult])``
    tuples; repeated pairs accumulate. Equality ignores insertion order and
    compares scales exactly; use :meth:`isclose` for tolerant comparison.
    """

    __slots__ = ("_counts",)

    def __init__(self, pairs: Iterable = ()):
        counts: Counter = Counter()
        for item in pairs:
            p = _as_pair(item)
            counts[p.key] += p.multiplicity
        self._counts = counts
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def from_lives(cls, lives: Iterable[tuple[float, float]]):
        """Build from raw life intervals, dropping zero-length ones."""
        kept = []
        for birth, death in lives:
            if death > birth and not scales_equal(birth, death):
                kept.append((birth, death))
        return cls(kept)

    @classmethod
    def _from_counts(cls, counts: Counter):
        obj = cls.__new__(cls)
        obj._counts = Counter({k: m for k, m in counts.items() if m > 0})
        obj._validate()
        return obj

    @property
    def pairs(self) -> tuple[DiagramPair, ...]:
        """Distinct pairs in canonical (birth, death) order."""
        return tuple(DiagramPair(b, d, m) for (b, d), m in sorted(self._counts.items()))

    def counts(self) -> dict[tuple[float, float], int]:
        return dict(self._counts)

    def multiplicity(self, birth: float, death: float) -> int:
        return self._counts.get((float(birth), float(death)), 0)

    def expand(self) -> list[tuple[float, float]]:
        """Pairs repeated by multiplicity, canonical order."""
        out = []
        for (b, d), m in sorted(self._counts.items()):
            out.extend([(b, d)] * m)
        return out

    def finite(self) -> list[tuple[float, float]]:
        return [p for p in self.expand() if math.isfinite(p[1])]

    def infinite(self) -> list[tuple[float, float]]:
        return [p for p in self.expand() if math.isinf(p[1])]

    def __iter__(self) -> Iterator[DiagramPair]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __sub__(self, other: "Diagram") -> "Diagram":
        return multiset_difference(self, other)

    def __repr__(self) -> str:
        body = ", ".join(
            f"({b:g},{d:g})" + (f"x{m}" if m > 1 else "") for (b, d), m in sorted(self._counts.items())
        )
        return f"{type(self).__name__}({{{body}}})"

    def isclose(self, other: "Diagram") -> bool:
        """Multiset equality under the shared scale tolerance."""
        mine, theirs = self.expand(), other.expand()
        if len(mine) != len(theirs):
            return False
        return all(
            scales_equal(a[0], b[0]) and scales_equal(a[1], b[1]) for a, b in zip(mine, theirs)
        )


class Mergegram(Diagram):
    """Diagram of merge-set lives; a non-empty one has exactly one infinite pair."""

    __slots__ = ()

    def _validate(self):
        if self._counts:
            n_inf = sum(m for (_, d), m in self._counts.items() if math.isinf(d))
            if n_inf != 1:
                raise ValueError(f"a mergegram has exactly one infinite pair, found {n_inf}")


class PersistenceDiagram(Diagram):
    """0-dimensional persistence diagram: every birth is 0, one infinite pair."""

    __slots__ = ()

    def _validate(self):
        if any(b != 0.0 for b, _ in self._counts):
            raise ValueError("persistence diagram births must all be 0")
        n_inf = sum(m for (_, d), m in self._counts.items() if math.isinf(d))
        if n_inf != 1:
            raise ValueError(f"a persistence diagram has exactly one infinite pair, found {n_inf}")


def multiset_difference(minuend: Iterable, subtrahend: Iterable) -> Diagram:
    """Multiplicity-wise ``max(0, a - b)``; pairs left with zero are dropped."""
    left = minuend if isinstance(minuend, Diagram) else Diagram(minuend)
    right = subtrahend if isinstance(subtrahend, Diagram) else Diagram(subtrahend)
    out = Counter(left._counts)
    out.subtract(right._counts)
    return Diagram._from_counts(out)


class PointCloud:
    """Non-empty ordered list of points of one dimension, stored as an (n, m) array.

    A 1-d input is read as ``n`` points on the line. Duplicate points are kept.
    """

    __slots__ = ("_points",)

    def __init__(self, points):
        if isinstance(points, PointCloud):
            arr = points._points
        else:
            try:
                arr = np.array(points, dtype=float)
            except ValueError as exc:
                raise DimensionMismatch(f"points must share one dimension: {exc}") from None
            if arr.ndim == 1:
                arr = arr.reshape(-1, 1)
            if arr.ndim != 2:
                raise DimensionMismatch(f"expected an (n, m) array of points, got shape {arr.shape}")
            if arr.shape[0] == 0:
                raise ValueError("a point cloud must be non-empty")
            if arr.shape[1] == 0:
                raise DimensionMismatch("points need dimension m >= 1")
            if not np.all(np.isfinite(arr)):
                raise ValueError("point coordinates must be finite")
            arr.setflags(write=False)
        self._points = arr

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._points if dtype is None else self._points.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self._points.shape == other._points.shape and bool(np.all(self._points == other._points))

    def __hash__(self):
        return hash((self._points.shape, self._points.tobytes()))

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, dim={self.dim})"

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self._points.min(axis=0), self._points.max(axis=0)


def as_cloud(points) -> PointCloud:
    return points if isinstance(points, PointCloud) else PointCloud(points)
