"""Seeded distortions of point clouds: rotations, affine and projective noise,
jitter inside a ball and random isometries.

Every generator draws from ``numpy.random.Generator(PCG64(seed))`` so a
(cloud, parameters, seed) triple always yields the same output.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import PointCloud, as_cloud
from .errors import DegenerateBoundingBox, DegenerateQuad, DimensionMismatch, SingularSystem

MAX_QUAD_TRIES = 100
MAX_TRUNCATION_DRAWS = 1000
COLLINEAR_TOL = 1e-9


class NoiseKind(enum.Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _planar(cloud) -> PointCloud:
    cloud = as_cloud(cloud)
    if cloud.dim != 2:
        raise DimensionMismatch(f"expected a 2D cloud, got dimension {cloud.dim}")
    return cloud


def _box(cloud: PointCloud) -> tuple[np.ndarray, float, float]:
    lo, hi = cloud.bounding_box()
    return lo, float(hi[0] - lo[0]), float(hi[1] - lo[1])


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def rotate_cloud(cloud, angle: float) -> PointCloud:
    """Rotate a 2D cloud counter-clockwise about its bounding-box center."""
    cloud = _planar(cloud)
    if angle == 0:
        return cloud
    lo, hi = cloud.bounding_box()
    center = (lo + hi) / 2.0
    return PointCloud((cloud.points - center) @ rotation_matrix(angle).T + center)


def random_rotation(cloud, seed: int) -> PointCloud:
    """Rotation by an angle drawn uniformly from ``[0, 2*pi)``."""
    return rotate_cloud(cloud, float(make_rng(seed).uniform(0.0, 2.0 * math.pi)))


def _truncated_normal(rng: np.random.Generator, mean: float, sd: float, lo: float, hi: float) -> float:
    """Rejection-sample ``N(mean, sd)`` restricted to ``[lo, hi]``; clamp after the cap."""
    if sd == 0:
        return min(max(mean, lo), hi)
    x = mean
    for _ in range(MAX_TRUNCATION_DRAWS):
        x = float(rng.normal(mean, sd))
        if lo <= x <= hi:
            return x
    return min(max(x, lo), hi)


def sample_affine_factors(w: float, h: float, delta: float, kind: NoiseKind, rng) -> tuple[float, float]:
    """Horizontal and vertical scale factors ``(a, b)``.

    Uniform: ``a ~ U[1 - delta*w, 1 + delta*w]``, ``b ~ U[1 - delta*h, 1 + delta*h]``.
    Gaussian: ``a ~ N(1, delta*h)``, ``b ~ N(1, delta*w)``, both truncated to
    positive values. The Gaussian case pairs ``a`` with ``h`` on purpose.
    """
    kind = NoiseKind(kind)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if kind is NoiseKind.UNIFORM:
        a = float(rng.uniform(1 - delta * w, 1 + delta * w)) if delta else 1.0
        b = float(rng.uniform(1 - delta * h, 1 + delta * h)) if delta else 1.0
        return a, b
    tiny = np.finfo(float).tiny
    a = _truncated_normal(rng, 1.0, delta * h, tiny, math.inf)
    b = _truncated_normal(rng, 1.0, delta * w, tiny, math.inf)
    return a, b


def affine_distort(cloud, delta: float, kind: NoiseKind, seed: int) -> PointCloud:
    """Scale coordinates about the bounding-box origin by sampled factors."""
    cloud = _planar(cloud)
    lo, w, h = _box(cloud)
    if w == 0 or h == 0:
        raise DegenerateBoundingBox(f"bounding box is {w} x {h}")
    a, b = sample_affine_factors(w, h, delta, kind, make_rng(seed))
    if a == 1.0 and b == 1.0:
        return cloud
    return PointCloud(lo + (cloud.points - lo) * np.array([a, b]))


def _collinear(p, q, r, scale: float) -> bool:
    cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return abs(cross) <= COLLINEAR_TOL * scale * scale


def _degenerate(quad: np.ndarray) -> bool:
    scale = max(float(np.ptp(quad[:, 0])), float(np.ptp(quad[:, 1])), 1e-300)
    idx = range(4)
    return any(
        _collinear(quad[i], quad[j], quad[k], scale)
        for i in idx for j in idx for k in idx if i < j < k
    )


def _corner_draw(w: float, h: float, delta: float, kind: NoiseKind, rng) -> np.ndarray:
    targets = [(0.0, 0.0), (0.0, h), (w, 0.0), (w, h)]
    out = np.empty((4, 2))
    for i, (tx, ty) in enumerate(targets):
        if kind is NoiseKind.UNIFORM:
            # Box of side delta*w (resp. delta*h) inside the image at this corner.
            x = rng.uniform(0.0, delta * w) if tx == 0 else rng.uniform(w - delta * w, w)
            y = rng.uniform(0.0, delta * h) if ty == 0 else rng.uniform(h - delta * h, h)
        else:
            x = _truncated_normal(rng, tx, delta * w, 0.0, w)
            y = _truncated_normal(rng, ty, delta * h, 0.0, h)
        out[i] = (x, y)
    return out


def sample_projective_corners(w: float, h: float, delta: float, kind: NoiseKind, seed: int) -> np.ndarray:
    """Targets ``a0..a3`` for the corners ``(0,0), (0,h), (w,0), (w,h)``.

    Returns a (4, 2) array. Degenerate (collinear) draws are resampled up to
    100 times before :class:`DegenerateQuad` is raised.
    """
    kind = NoiseKind(kind)
    if w <= 0 or h <= 0:
        raise DegenerateBoundingBox(f"rectangle is {w} x {h}")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if kind is NoiseKind.UNIFORM and delta > 0.5:
        raise ValueError("uniform corner noise needs delta <= 0.5")
    if delta == 0:
        return np.array([[0.0, 0.0], [0.0, h], [w, 0.0], [w, h]])
    rng = make_rng(seed)
    for _ in range(MAX_QUAD_TRIES):
        quad = _corner_draw(w, h, delta, kind, rng)
        if not _degenerate(quad):
            return quad
    raise DegenerateQuad(f"no non-degenerate corner quad in {MAX_QUAD_TRIES} draws")


@dataclass(frozen=True)
class Homography:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"homography must be 3x3, got {m.shape}")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise SingularSystem("homography matrix is not invertible")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        homog = np.hstack([pts, np.ones((len(pts), 1))]) @ self.matrix.T
        return homog[:, :2] / homog[:, 2:3]


def solve_homography(src, dst) -> Homography:
    """Projective map sending four source points onto four targets.

    Solves the 8x8 linear system for the entries of H with ``H[2, 2] = 1``
    (LU factorisation with partial pivoting).
    """
    src = np.asarray(src, dtype=float).reshape(4, 2)
    dst = np.asarray(dst, dtype=float).reshape(4, 2)
    if _degenerate(src) or _degenerate(dst):
        raise SingularSystem("three of the four points are collinear")
    A = np.zeros((8, 8))
    rhs = np.zeros(8)
    for i, ((x, y), (u, v)) in enumerate(zip(src, dst)):
        A[2 * i] = (x, y, 1, 0, 0, 0, -u * x, -u * y)
        A[2 * i + 1] = (0, 0, 0, x, y, 1, -v * x, -v * y)
        rhs[2 * i], rhs[2 * i + 1] = u, v
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None
    return Homography(np.append(sol, 1.0).reshape(3, 3))


def bounding_corners(cloud) -> np.ndarray:
    """Bounding-box corners in the order ``(0,0), (0,h), (w,0), (w,h)``."""
    lo, w, h = _box(as_cloud(cloud))
    return lo + np.array([[0.0, 0.0], [0.0, h], [w, 0.0], [w, h]])


def projective_distort(cloud, delta: float, kind: NoiseKind, seed: int) -> PointCloud:
    cloud = _planar(cloud)
    lo, w, h = _box(cloud)
    if w == 0 or h == 0:
        raise DegenerateBoundingBox(f"bounding box is {w} x {h}")
    if delta == 0:
        return cloud
    targets = lo + sample_projective_corners(w, h, delta, kind, seed)
    hom = solve_homography(bounding_corners(cloud), targets)
    return PointCloud(hom.apply(cloud.points))


def jitter(cloud, epsilon: float, seed: int) -> PointCloud:
    """Move every point uniformly inside the closed ball of radius ``epsilon``."""
    cloud = as_cloud(cloud)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if epsilon == 0:
        return cloud
    rng = make_rng(seed)
    n, m = cloud.points.shape
    direction = rng.standard_normal((n, m))
    norms = np.linalg.norm(direction, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    # Shrink by 1e-12 so rounding in the sum never pushes a point past epsilon.
    radius = epsilon * (1 - 1e-12) * rng.random((n, 1)) ** (1.0 / m)
    return PointCloud(cloud.points + direction / norms * radius)


def apply_isometry(cloud, orthogonal, translation) -> PointCloud:
    cloud = as_cloud(cloud)
    q = np.asarray(orthogonal, dtype=float)
    t = np.asarray(translation, dtype=float)
    return PointCloud(cloud.points @ q.T + t)


def random_orthogonal(dim: int, rng: np.random.Generator, allow_reflection: bool) -> np.ndarray:
    """Haar-random rotation; with ``allow_reflection`` half the draws also reflect."""
    if dim == 1:
        q = np.ones((1, 1))
    elif dim == 2:
        q = rotation_matrix(float(rng.uniform(0.0, 2.0 * math.pi)))
    else:
        z = rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(z)
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
    if allow_reflection and rng.random() < 0.5:
        q = q @ np.diag([-1.0] + [1.0] * (dim - 1))
    return q


def random_isometry(cloud, seed: int, allow_reflection: bool = True, max_shift: float = 10.0) -> PointCloud:
    """Random rotation, optional reflection and a translation in ``[-max_shift, max_shift]^m``."""
    cloud = as_cloud(cloud)
    rng = make_rng(seed)
    q = random_orthogonal(cloud.dim, rng, allow_reflection)
    t = rng.uniform(-max_shift, max_shift, size=cloud.dim)
    return apply_isometry(cloud, q, t)
