"""Simulated place-cell activity in arenas with circular forbidden zones.

A random walk on a square grid visits an arena; place cells fire whenever the
walker is inside their circular field; delayed co-firing counts between cells
become a directed network whose 1-dimensional Dowker diagram is compared
across arenas by bottleneck distance.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .diagmetric import Dendrogram, DistanceMatrix, bottleneck_matrix, single_linkage
from .filtration import dowker_sink_filtration, rips_filtration
from .homology import PersistenceDiagram, compute_persistence
from .network import Network

log = logging.getLogger(__name__)

# hole centres, in units of the side length; class h uses the first h of them
HOLE_CENTRES = ((0.25, 0.25), (0.75, 0.75), (0.75, 0.25), (0.25, 0.75))
MOVES = np.array([(1, 0), (-1, 0), (0, 1), (0, -1)])


@dataclass(frozen=True)
class Arena:
    side: float = 10.0
    holes: tuple[tuple[float, float, float], ...] = ()      # (cx, cy, radius)
    grid: int = 20
    step: float | None = None

    @classmethod
    def with_holes(cls, n_holes: int, side: float = 10.0, grid: int = 20,
                   hole_radius: float = 0.2) -> "Arena":
        if not 0 <= n_holes <= len(HOLE_CENTRES):
            raise ValueError(f"n_holes must be in 0..{len(HOLE_CENTRES)}")
        holes = tuple((cx * side, cy * side, hole_radius * side) for cx, cy in HOLE_CENTRES[:n_holes])
        return cls(side, holes, grid)

    def __post_init__(self):
        for cx, cy, r in self.holes:
            if not (0 <= cx - r and cx + r <= self.side and 0 <= cy - r and cy + r <= self.side):
                raise ValueError(f"hole at ({cx}, {cy}) radius {r} leaves the arena")
        if self.step is None:
            object.__setattr__(self, "step", self.side / self.grid)

    def grid_coords(self, ij) -> np.ndarray:
        """Grid index pairs to positions; grid points sit at cell centres."""
        return (np.asarray(ij, dtype=float) + 0.5) * self.step

    def in_hole(self, xy) -> np.ndarray:
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        blocked = np.zeros(len(xy), dtype=bool)
        for cx, cy, r in self.holes:
            blocked |= np.hypot(xy[:, 0] - cx, xy[:, 1] - cy) <= r
        return blocked

    def allowed_mask(self) -> np.ndarray:
        ii, jj = np.meshgrid(np.arange(self.grid), np.arange(self.grid), indexing="ij")
        pts = self.grid_coords(np.stack([ii.ravel(), jj.ravel()], axis=1))
        return ~self.in_hole(pts).reshape(self.grid, self.grid)


def simulate_trajectory(arena: Arena, steps: int, seed, start=None) -> np.ndarray:
    """Random walk of ``steps`` positions on the arena grid, as ``(steps, 2)`` grid indices.

    Each step picks uniformly among the axis moves that stay on the grid and
    out of every hole.
    """
    rng = np.random.default_rng(seed)
    allowed = arena.allowed_mask()
    if start is None:
        free = np.argwhere(allowed)
        start = free[rng.integers(len(free))]
    start = np.asarray(start, dtype=int)
    if not (0 <= start[0] < arena.grid and 0 <= start[1] < arena.grid) or not allowed[tuple(start)]:
        raise ValueError(f"start position {tuple(start)} is outside the allowed region")
    path = np.empty((steps, 2), dtype=int)
    pos = start.copy()
    g = arena.grid
    for t in range(steps):
        path[t] = pos
        nxt = pos + MOVES
        ok = ((nxt >= 0) & (nxt < g)).all(axis=1)
        ok[ok] = allowed[nxt[ok, 0], nxt[ok, 1]]
        choices = np.flatnonzero(ok)
        pos = nxt[choices[rng.integers(len(choices))]]
    return path


def coverage(arena: Arena, path: np.ndarray) -> float:
    """Fraction of allowed grid points the path visits."""
    allowed = arena.allowed_mask()
    seen = np.zeros_like(allowed)
    seen[path[:, 0], path[:, 1]] = True
    return float(seen.sum() / allowed.sum())


def scatter_place_fields(arena: Arena, n: int, seed, radius: float | None = None) -> np.ndarray:
    """``n`` uniform field centres outside the holes, as rows ``(cx, cy, radius)``."""
    if n <= 0:
        raise ValueError("need at least one place field")
    rng = np.random.default_rng(seed)
    radius = 0.05 * arena.side if radius is None else radius
    centres = np.empty((0, 2))
    while len(centres) < n:
        batch = rng.random((2 * n, 2)) * arena.side
        centres = np.vstack([centres, batch[~arena.in_hole(batch)]])
    centres = centres[:n]
    return np.column_stack([centres, np.full(n, radius)])


def compute_rasters(positions: np.ndarray, fields: np.ndarray) -> np.ndarray:
    """Binary raster ``r[i, t]``: cell i fires at time t iff the position lies in field i."""
    positions = np.asarray(positions, dtype=float)
    fields = np.asarray(fields, dtype=float)
    dx = positions[None, :, 0] - fields[:, None, 0]
    dy = positions[None, :, 1] - fields[:, None, 1]
    return (np.hypot(dx, dy) <= fields[:, 2:3]).astype(np.uint8)


def delayed_cofiring(raster: np.ndarray, window: int = 5) -> np.ndarray:
    """``N[i, j]``: pairs of times s < t <= s + window with cell i firing at s and j at t."""
    if window < 1:
        raise ValueError("window must be >= 1")
    r = np.asarray(raster, dtype=np.int64)
    N = np.zeros((r.shape[0], r.shape[0]), dtype=np.int64)
    for lag in range(1, min(window, r.shape[1] - 1) + 1):
        N += r[:, :-lag] @ r[:, lag:].T
    return N


def induce_network(raster: np.ndarray, window: int = 5, labels=None) -> Network:
    """Weights ``1 - N[i, j] / sum_i N[i, j]``; silent columns get weight 1 throughout."""
    N = delayed_cofiring(raster, window).astype(float)
    col = N.sum(axis=0)
    w = np.ones_like(N)
    live = col > 0
    w[:, live] = 1.0 - N[:, live] / col[live]
    return Network.from_matrix(w, labels)


def normalize_weights(X: Network) -> Network:
    """Affine rescaling of all weights (diagonal included) onto [0, 1]."""
    lo, hi = X.weights.min(), X.weights.max()
    if hi == lo:
        return Network(X.labels, np.zeros_like(X.weights))
    return Network(X.labels, (X.weights - lo) / (hi - lo))


def snap_weights(X: Network, resolution: float = 0.01) -> Network:
    """Round weights up to the next multiple of ``resolution``."""
    return Network(X.labels, np.ceil(X.weights / resolution - 1e-9) * resolution)


# ----------------------------------------------------------------- experiment

@dataclass(frozen=True)
class ExperimentConfig:
    hole_counts: tuple[int, ...] = (0, 1, 2, 3, 4)
    trials_per_class: int = 4
    steps: int = 2000
    n_fields: tuple[int, int] = (40, 60)
    side: float = 10.0
    grid: int = 20
    hole_radius: float = 0.2
    field_radius: float = 0.05
    window: int = 5
    master_seed: int = 0
    method: str = "dowker"
    snap: float | None = None
    coverage_threshold: float = 0.5
    jobs: int = 1

    @classmethod
    def full_scale(cls, **kw) -> "ExperimentConfig":
        return cls(**{"trials_per_class": 20, "steps": 5000, "n_fields": (150, 200), **kw})

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        for key in ("hole_counts", "n_fields"):
            if key in data:
                data[key] = tuple(data[key])
        cfg = cls(**data)
        cfg.check()
        return cfg

    def check(self) -> None:
        if self.trials_per_class < 1 or self.steps < 2 or self.window < 1:
            raise ValueError("trials_per_class, steps and window must be positive")
        lo, hi = self.n_fields
        if not 1 <= lo <= hi:
            raise ValueError("n_fields must be a range 1 <= lo <= hi")
        if self.method not in ("dowker", "rips"):
            raise ValueError("method must be 'dowker' or 'rips'")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass
class TrialResult:
    label: str
    n_holes: int
    n_fields: int
    seed: tuple[int, int, int]
    coverage: float
    network: Network
    diagram: PersistenceDiagram


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: list[TrialResult]
    matrix: DistanceMatrix
    dendrogram: Dendrogram
    seconds: float = 0.0
    flagged: list[str] = field(default_factory=list)

    def class_separation(self, a: int, b: int) -> tuple[float, float]:
        """Mean within-class distance (classes a and b pooled) and mean a-vs-b distance."""
        holes = np.array([t.n_holes for t in self.trials])
        d = self.matrix.d
        within = []
        for h in (a, b):
            idx = np.flatnonzero(holes == h)
            within += [d[i, j] for k, i in enumerate(idx) for j in idx[k + 1:]]
        ia, ib = np.flatnonzero(holes == a), np.flatnonzero(holes == b)
        between = [d[i, j] for i in ia for j in ib]
        return float(np.mean(within)), float(np.mean(between))


def run_trial(cfg: ExperimentConfig, n_holes: int, trial: int) -> TrialResult:
    seed = (cfg.master_seed, n_holes, trial)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    walk_seed, field_seed = rng.integers(2**63, size=2)
    arena = Arena.with_holes(n_holes, cfg.side, cfg.grid, cfg.hole_radius)
    n_fields = int(rng.integers(cfg.n_fields[0], cfg.n_fields[1] + 1))
    path = simulate_trajectory(arena, cfg.steps, walk_seed)
    fields = scatter_place_fields(arena, n_fields, field_seed, cfg.field_radius * cfg.side)
    raster = compute_rasters(arena.grid_coords(path), fields)
    X = normalize_weights(induce_network(raster, cfg.window))
    if cfg.snap:
        X = snap_weights(X, cfg.snap)
    build = dowker_sink_filtration if cfg.method == "dowker" else rips_filtration
    dgm = compute_persistence(build(X, 2), 1)
    return TrialResult(f"env-{n_holes}-{n_fields}", n_holes, n_fields, seed,
                       coverage(arena, path), X, dgm)


def _run_trial_args(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    cfg.check()
    t0 = time.perf_counter()
    jobs = [(cfg, h, k) for h in cfg.hole_counts for k in range(cfg.trials_per_class)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            trials = list(pool.map(_run_trial_args, jobs))
    else:
        trials = [run_trial(*j) for j in jobs]
    flagged = [t.label for t in trials if t.coverage < cfg.coverage_threshold]
    for t in trials:
        log.info("%s coverage=%.2f points=%d", t.label, t.coverage, len(t.diagram[1]))
    matrix = bottleneck_matrix([t.diagram for t in trials], 1, [t.label for t in trials])
    if not np.all(np.isfinite(matrix.d)):
        i, j = np.argwhere(~np.isfinite(matrix.d))[0]
        raise ValueError(f"infinite bottleneck distance between {matrix.labels[i]} and {matrix.labels[j]}")
    result = ExperimentResult(cfg, trials, matrix, single_linkage(matrix),
                              time.perf_counter() - t0, flagged)
    if out_dir is not None:
        write_artifacts(result, out_dir)
    return result


def write_artifacts(result: ExperimentResult, out_dir) -> None:
    from .io import atomic_write

    out = Path(out_dir)
    (out / "networks").mkdir(parents=True, exist_ok=True)
    (out / "diagrams").mkdir(exist_ok=True)
    for k, t in enumerate(result.trials):
        stem = f"{k:03d}_{t.label}"
        atomic_write(out / "networks" / f"{stem}.json", t.network.to_json())
        atomic_write(out / "diagrams" / f"{stem}.csv", t.diagram.to_csv())
    atomic_write(out / "matrix.csv", result.matrix.to_csv())
    atomic_write(out / "dendrogram.json", result.dendrogram.to_json())
    manifest = {
        "config": asdict(result.config),
        "trials": [{"label": t.label, "n_holes": t.n_holes, "n_fields": t.n_fields,
                    "seed": list(t.seed), "coverage": t.coverage} for t in result.trials],
        "low_coverage": result.flagged,
    }
    atomic_write(out / "manifest.json", json.dumps(manifest, indent=2))


def with_jobs(cfg: ExperimentConfig, jobs: int) -> ExperimentConfig:
    return replace(cfg, jobs=jobs)

