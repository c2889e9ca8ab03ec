"""Recovery benchmark on the 5-block Normal testbed: WSBM vs. the baselines."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import ThresholdPlan, fit_thresholded_sbm, hierarchical_labels, kmeans_labels
from .metrics import vi
from .synth import default_testbed, generate
from .vb import FitConfig, fit

__all__ = ["METHODS", "SWEEPS", "BenchmarkConfig", "BenchmarkRow", "run_benchmark", "rows_to_csv"]

METHODS = ("wsbm", "threshold_sbm_best", "threshold_sbm_mean", "kmeans", "hierarchical")

# sweep variable -> default grid and the fixed settings of the other two axes
SWEEPS = {
    "k": dict(grid=(2, 3, 4, 5, 6, 7, 8), n=160, variance=100.0, k=None),
    "variance": dict(grid=(25.0, 100.0, 400.0, 900.0, 1600.0, 2500.0), n=160, variance=None, k=5),
    "n": dict(grid=(40, 80, 160, 320), n=None, variance=100.0, k=5),
}

CSV_COLUMNS = ("sweep", "value", "method", "mean_vi", "stderr_vi", "datasets", "seed0")


@dataclass
class BenchmarkConfig:
    sweep: str
    datasets: int = 30
    seed0: int = 0
    grid: tuple | None = None
    restarts: int = 10
    kmeans_restarts: int = 10
    quantiles: tuple[float, ...] = field(default_factory=lambda: ThresholdPlan().thresholds)

    def __post_init__(self):
        if self.sweep not in SWEEPS:
            raise ValueError(f"unknown sweep {self.sweep!r}; expected one of {sorted(SWEEPS)}")
        if self.datasets < 1:
            raise ValueError("datasets must be >= 1")
        grid = SWEEPS[self.sweep]["grid"] if self.grid is None else tuple(self.grid)
        if not grid:
            raise ValueError("empty grid")
        for v in grid:
            if self.sweep == "variance" and not float(v) > 0:
                raise ValueError(f"variance grid values must be positive, got {v}")
            if self.sweep in ("k", "n") and (int(v) != v or v < (1 if self.sweep == "k" else 5)):
                raise ValueError(f"invalid {self.sweep} grid value {v}")
        self.grid = grid
        ThresholdPlan(self.quantiles)

    def settings(self, value) -> tuple[int, float, int]:
        """(n, variance, k) for one grid value."""
        fixed = SWEEPS[self.sweep]
        n = int(value) if self.sweep == "n" else fixed["n"]
        variance = float(value) if self.sweep == "variance" else fixed["variance"]
        k = int(value) if self.sweep == "k" else fixed["k"]
        return n, variance, k

    def header(self) -> list[str]:
        fixed = {key: val for key, val in SWEEPS[self.sweep].items() if key != "grid" and val is not None}
        return [
            f"sweep={self.sweep} grid={','.join(str(v) for v in self.grid)}",
            f"fixed={fixed} datasets={self.datasets} seed0={self.seed0}",
            f"wsbm: family=normal restarts={self.restarts}; threshold_sbm: quantiles="
            f"{','.join(str(q) for q in self.quantiles)} restarts={self.restarts}",
            f"kmeans: pca_dim=k restarts={self.kmeans_restarts}; hierarchical: average linkage, euclidean rows",
            "testbed: 5 equal Normal blocks, bundle r mean 10*r, shared variance",
        ]


@dataclass
class BenchmarkRow:
    sweep: str
    value: float
    method: str
    mean_vi: float
    stderr_vi: float
    datasets: int
    seed0: int


def _dataset_scores(cfg: BenchmarkConfig, value, d: int) -> dict[str, float]:
    n, variance, k = cfg.settings(value)
    seed = cfg.seed0 + d
    graph, truth = generate(default_testbed(n, variance, seed=seed))
    k = min(k, n)
    wsbm = fit(graph, FitConfig(k=k, family="normal", restarts=cfg.restarts, seed=seed))
    thresholded = fit_thresholded_sbm(
        graph, ThresholdPlan(cfg.quantiles), k, FitConfig(k=k, family="bernoulli", restarts=cfg.restarts, seed=seed)
    )
    th_vi = [vi(truth, t.result.z) for t in thresholded]
    return {
        "wsbm": vi(truth, wsbm.z),
        "threshold_sbm_best": min(th_vi),
        "threshold_sbm_mean": float(np.mean(th_vi)),
        "kmeans": vi(truth, kmeans_labels(graph, k, cfg.kmeans_restarts, seed)),
        "hierarchical": vi(truth, hierarchical_labels(graph, k)),
    }


def run_benchmark(cfg: BenchmarkConfig, progress=None) -> list[BenchmarkRow]:
    """One row per (grid value, method), in grid order then METHODS order."""
    rows = []
    for value in cfg.grid:
        scores = {m: [] for m in METHODS}
        for d in range(cfg.datasets):
            for method, score in _dataset_scores(cfg, value, d).items():
                scores[method].append(score)
            if progress is not None:
                progress(value, d)
        for method in METHODS:
            x = np.asarray(scores[method])
            stderr = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
            rows.append(BenchmarkRow(cfg.sweep, float(value), method, float(x.mean()), stderr, cfg.datasets, cfg.seed0))
    return rows


def rows_to_csv(rows: list[BenchmarkRow], header: list[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.sweep, repr(r.value), r.method, repr(r.mean_vi), repr(r.stderr_vi), r.datasets, r.seed0])
    return buf.getvalue()
