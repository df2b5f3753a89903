"""Mergegram: a stable isometry invariant of point clouds built on single-linkage clustering."""

from .core import (
    INF,
    Diagram,
    DiagramPair,
    Mergegram,
    PersistenceDiagram,
    PointCloud,
    multiset_difference,
    scales_equal,
)
from .errors import (
    CloudTooSmall,
    DanglingBirth,
    DegenerateBoundingBox,
    DegenerateQuad,
    DimensionMismatch,
    InvalidMetric,
    LeafDeficit,
    MergegramError,
    NegativeMultiplicity,
    NotGeneralPosition,
    ParseError,
    ReconstructionError,
    SingularSystem,
)
from .invariants import (
    NnDistanceSet,
    cloud_mergegram,
    cloud_persistence,
    mergegram,
    nn_distances,
    persistence0d_from_mergegram,
    persistence0d_from_mst,
)
from .linkage import (
    ClusterNode,
    Dendrogram,
    ScaleConvention,
    SpanningTree,
    build_mst,
    build_mst_euclidean,
    cloud_mst,
    pairwise_distances,
    single_linkage,
)
from .metrics import bottleneck, diagonal_distance, hausdorff, linf_pair_distance
from .reconstruct import is_general_position, reconstruct_dendrogram

__version__ = "0.1.0"

__all__ = [
    "bottleneck",
    "build_mst",
    "build_mst_euclidean",
    "cloud_mergegram",
    "cloud_mst",
    "cloud_persistence",
    "CloudTooSmall",
    "ClusterNode",
    "DanglingBirth",
    "DegenerateBoundingBox",
    "DegenerateQuad",
    "Dendrogram",
    "diagonal_distance",
    "Diagram",
    "DiagramPair",
    "DimensionMismatch",
    "hausdorff",
    "INF",
    "InvalidMetric",
    "is_general_position",
    "LeafDeficit",
    "linf_pair_distance",
    "Mergegram",
    "mergegram",
    "MergegramError",
    "multiset_difference",
    "NegativeMultiplicity",
    "nn_distances",
    "NnDistanceSet",
    "NotGeneralPosition",
    "pairwise_distances",
    "ParseError",
    "persistence0d_from_mergegram",
    "persistence0d_from_mst",
    "PersistenceDiagram",
    "PointCloud",
    "reconstruct_dendrogram",
    "ReconstructionError",
    "ScaleConvention",
    "scales_equal",
    "single_linkage",
    "SingularSystem",
    "SpanningTree",
]
