"""Rebuild a single-linkage dendrogram from a mergegram in general position."""

from __future__ import annotations

from .core import INF, Diagram, Mergegram, group_scales, scales_equal
from .errors import DanglingBirth, LeafDeficit, NotGeneralPosition, ReconstructionError
from .linkage import ClusterNode, Dendrogram


def _death_buckets(mg: Diagram) -> list[list[tuple[float, float]]]:
    """Finite pairs grouped by tolerant death scale, ascending."""
    finite = mg.finite()
    buckets = []
    for values in group_scales({d for _, d in finite}):
        lo, hi = values[0], values[-1]
        buckets.append([p for p in finite if lo <= p[1] <= hi])
    return buckets


def is_general_position(mg: Diagram) -> bool:
    """True iff every finite death scale is shared by exactly two pairs."""
    return all(len(bucket) == 2 for bucket in _death_buckets(mg))


def reconstruct_dendrogram(mg: Diagram) -> Dendrogram:
    """Binary merge tree whose mergegram is ``mg``.

    Death scales are replayed in ascending order. At each scale the two pairs
    ending there pick their clusters: a pair born at 0 takes a fresh leaf,
    a pair born at ``b > 0`` takes the unique open cluster formed at ``b``.
    Leaves are numbered 0..n-1 in order of first use.
    """
    if not isinstance(mg, Mergegram):
        try:
            mg = Mergegram(mg)
        except ValueError as exc:
            raise ReconstructionError(str(exc)) from None
    if not mg:
        raise ReconstructionError("cannot reconstruct from an empty mergegram")
    buckets = _death_buckets(mg)
    for bucket in buckets:
        if len(bucket) != 2:
            scale = bucket[0][1]
            raise NotGeneralPosition(
                f"death scale {scale:g} occurs {len(bucket)} times, expected 2", scale=scale
            )
    total = len(mg)
    if total % 2 == 0:
        raise ReconstructionError(f"a binary merge tree has an odd number of nodes, got {total}")
    n_leaves = (total + 1) // 2

    members: list[frozenset] = []
    births: list[float] = []
    deaths: list[float] = []
    children: list[tuple[int, ...]] = []
    open_by_birth: list[tuple[float, int]] = []
    used_leaves = 0

    def take(birth: float, death: float) -> int:
        nonlocal used_leaves
        if scales_equal(birth, 0.0):
            if used_leaves == n_leaves:
                raise LeafDeficit(f"pair ({birth:g}, {death:g}) needs a leaf but all {n_leaves} are used")
            node = len(members)
            members.append(frozenset([used_leaves]))
            births.append(0.0)
            deaths.append(death)
            children.append(())
            used_leaves += 1
            return node
        for k, (b, node) in enumerate(open_by_birth):
            if scales_equal(b, birth):
                del open_by_birth[k]
                deaths[node] = death
                return node
        raise DanglingBirth(f"pair ({birth:g}, {death:g}) refers to no open cluster born at {birth:g}")

    for bucket in buckets:
        (b1, d1), (b2, d2) = bucket
        scale = min(d1, d2)
        kids = tuple(sorted((take(b1, d1), take(b2, d2))))
        if any(scales_equal(b, scale) for b, _ in open_by_birth):
            raise NotGeneralPosition(f"two open clusters born at scale {scale:g}", scale=scale)
        node = len(members)
        members.append(members[kids[0]] | members[kids[1]])
        births.append(scale)
        deaths.append(INF)
        children.append(kids)
        open_by_birth.append((scale, node))

    (root_birth, _), = mg.infinite()
    root = take(root_birth, INF)
    if open_by_birth:
        stray = ", ".join(f"{b:g}" for b, _ in open_by_birth)
        raise ReconstructionError(f"clusters born at {stray} never merge into the root")
    if used_leaves != n_leaves:
        raise ReconstructionError(f"{n_leaves - used_leaves} leaves were never merged")
    if root != len(members) - 1:
        raise ReconstructionError("root is not the last cluster formed")

    nodes = tuple(
        ClusterNode(i, members[i], births[i], deaths[i], children[i]) for i in range(len(members))
    )
    return Dendrogram(nodes, root)
