"""Batch stability runs: perturb random clouds, compare HD against BD."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import PointCloud
from .errors import ConfigError
from .invariants import cloud_mergegram, cloud_persistence
from .linkage import ScaleConvention
from .metrics import bottleneck, hausdorff
from .perturb import (
    NoiseKind,
    affine_distort,
    jitter,
    projective_distort,
    random_isometry,
    random_rotation,
)

SLACK = 1e-9
KINDS = ("jitter", "isometry_jitter", "rotate", "affine", "projective")
REPORT_COLUMNS = ("n", "HD", "BD_mergegram", "BD_pd0", "inequality_ok")


@dataclass(frozen=True)
class Perturbation:
    kind: str = "jitter"
    epsilon: float = 0.5
    delta: float = 0.1
    noise: str = "uniform"
    allow_reflection: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a stability run.

    ``jitter`` moves each point by at most ``epsilon``, drawn per trial from
    ``U(0, epsilon]``. ``isometry_jitter`` additionally applies a random
    isometry after jittering; HD is measured before the isometry, which the
    mergegram cannot see. ``rotate``, ``affine`` and ``projective`` need
    ``dimension == 2``.
    """

    trials: int
    n_min: int = 5
    n_max: int = 80
    dimension: int = 2
    perturbation: Perturbation = field(default_factory=Perturbation)
    seed: int = 0
    convention: str = "half"
    extent: float = 10.0
    out: str | None = None
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")
        if "trials" not in data:
            raise ConfigError("field 'trials' is required")
        pert = data.get("perturbation", {})
        if not isinstance(pert, dict):
            raise ConfigError("field 'perturbation' must be an object")
        pknown = set(Perturbation.__dataclass_fields__)
        if set(pert) - pknown:
            raise ConfigError(f"unknown perturbation field(s): {', '.join(sorted(set(pert) - pknown))}")
        values = dict(data)
        values["perturbation"] = Perturbation(**pert)
        cfg = cls(**values)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
        return cls.from_dict(data)

    def validate(self) -> None:
        def need(ok: bool, name: str, rule: str):
            if not ok:
                raise ConfigError(f"field '{name}': {rule}")

        def is_int(v):
            return isinstance(v, int) and not isinstance(v, bool)

        def is_num(v):
            return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)

        need(is_int(self.trials) and 1 <= self.trials <= 1_000_000, "trials", "integer in [1, 1000000]")
        need(is_int(self.n_min) and 1 <= self.n_min <= 5000, "n_min", "integer in [1, 5000]")
        need(is_int(self.n_max) and self.n_min <= self.n_max <= 5000, "n_max", "integer in [n_min, 5000]")
        need(is_int(self.dimension) and 1 <= self.dimension <= 16, "dimension", "integer in [1, 16]")
        need(is_int(self.seed) and 0 <= self.seed < 2**64, "seed", "integer in [0, 2^64)")
        need(self.convention in ("half", "full"), "convention", "'half' or 'full'")
        need(is_num(self.extent) and self.extent > 0, "extent", "positive number")
        need(is_int(self.workers) and 1 <= self.workers <= 256, "workers", "integer in [1, 256]")
        need(self.out is None or isinstance(self.out, str), "out", "string path")
        p = self.perturbation
        need(p.kind in KINDS, "perturbation.kind", f"one of {', '.join(KINDS)}")
        need(is_num(p.epsilon) and p.epsilon >= 0, "perturbation.epsilon", "non-negative number")
        need(is_num(p.delta) and 0 <= p.delta <= 1, "perturbation.delta", "number in [0, 1]")
        need(p.noise in ("uniform", "gaussian"), "perturbation.noise", "'uniform' or 'gaussian'")
        need(isinstance(p.allow_reflection, bool), "perturbation.allow_reflection", "boolean")
        if p.kind in ("rotate", "affine", "projective"):
            need(self.dimension == 2, "dimension", f"must be 2 for perturbation kind '{p.kind}'")
            need(self.n_min >= 3, "n_min", f"at least 3 for perturbation kind '{p.kind}'")
        if p.kind == "projective" and p.noise == "uniform":
            need(p.delta <= 0.5, "perturbation.delta", "at most 0.5 for uniform projective noise")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrialResult:
    n: int
    hd: float
    bd_mergegram: float
    bd_pd0: float

    @property
    def ok(self) -> bool:
        return self.bd_mergegram <= self.hd + SLACK and self.bd_pd0 <= self.hd + SLACK


def _perturb(cfg: ExperimentConfig, cloud: PointCloud, rng: np.random.Generator):
    """Return ``(reference_for_hd, perturbed_cloud)``."""
    p = cfg.perturbation
    sub = int(rng.integers(2**63))
    if p.kind == "jitter":
        eps = float(p.epsilon * (1.0 - rng.random()))
        out = jitter(cloud, eps, sub)
        return out, out
    if p.kind == "isometry_jitter":
        eps = float(p.epsilon * (1.0 - rng.random()))
        moved = jitter(cloud, eps, sub)
        return moved, random_isometry(moved, int(rng.integers(2**63)), p.allow_reflection)
    if p.kind == "rotate":
        out = random_rotation(cloud, sub)
        return out, out
    noise = NoiseKind(p.noise)
    out = (affine_distort if p.kind == "affine" else projective_distort)(cloud, p.delta, noise, sub)
    return out, out


def run_trial(cfg: ExperimentConfig, index: int) -> TrialResult:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, index])))
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    cloud = PointCloud(rng.uniform(0.0, cfg.extent, size=(n, cfg.dimension)))
    seen, perturbed = _perturb(cfg, cloud, rng)
    conv = ScaleConvention(cfg.convention)
    hd = hausdorff(cloud, seen)
    bd_mg = bottleneck(cloud_mergegram(cloud, conv), cloud_mergegram(perturbed, conv))
    bd_pd = bottleneck(cloud_persistence(cloud, conv), cloud_persistence(perturbed, conv))
    return TrialResult(n, hd, bd_mg, bd_pd)


def _run_one(args):
    cfg, index = args
    return run_trial(cfg, index)


def run_experiment(cfg: ExperimentConfig) -> list[TrialResult]:
    """All trials, in trial-index order regardless of ``workers``."""
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if cfg.workers == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_one, jobs, chunksize=max(1, cfg.trials // (4 * cfg.workers))))


def report_text(results: list[TrialResult]) -> str:
    lines = ["\t".join(REPORT_COLUMNS)]
    for r in results:
        lines.append(f"{r.n}\t{r.hd!r}\t{r.bd_mergegram!r}\t{r.bd_pd0!r}\t{str(r.ok).lower()}")
    return "\n".join(lines) + "\n"


def summary_line(results: list[TrialResult]) -> str:
    violations = sum(not r.ok for r in results)

    def max_ratio(attr):
        ratios = [getattr(r, attr) / r.hd for r in results if r.hd > 0]
        return max(ratios, default=0.0)

    return (
        f"trials: {len(results)}\tviolations: {violations}\t"
        f"max_ratio_mergegram: {max_ratio('bd_mergegram'):.6g}\tmax_ratio_pd0: {max_ratio('bd_pd0'):.6g}"
    )
