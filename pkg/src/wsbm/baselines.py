"""Comparison methods: thresholded Bernoulli SBM, PCA + k-means, average-linkage clustering."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.cluster.hierarchy import cut_tree, linkage
from scipy.spatial.distance import pdist
from scipy.special import ndtr
from sklearn.cluster import KMeans
from sklearn.decomposition import PCA
from sklearn.exceptions import ConvergenceWarning

from .graph import WeightedGraph
from .vb import FitConfig, FitResult, fit

__all__ = [
    "ThresholdPlan",
    "threshold_graph",
    "exceedance_prob",
    "ThresholdFit",
    "fit_thresholded_sbm",
    "kmeans_labels",
    "hierarchical_labels",
]

DEFAULT_QUANTILES = tuple(round(0.1 * i, 1) for i in range(1, 10))


@dataclass(frozen=True)
class ThresholdPlan:
    """Absolute thresholds, or quantiles in (0, 1) of the off-diagonal weights."""

    thresholds: tuple[float, ...] = DEFAULT_QUANTILES
    quantiles: bool = True

    def __post_init__(self):
        t = tuple(float(x) for x in self.thresholds)
        if not t:
            raise ValueError("threshold plan is empty")
        if self.quantiles and not all(0.0 < q < 1.0 for q in t):
            raise ValueError("quantiles must lie strictly inside (0, 1)")
        object.__setattr__(self, "thresholds", t)

    def resolve(self, A: WeightedGraph) -> list[float]:
        if not self.quantiles:
            return list(self.thresholds)
        return [float(x) for x in np.quantile(A.upper(), self.thresholds)]


def threshold_graph(A: WeightedGraph, t: float) -> WeightedGraph:
    """Binary graph of weights strictly above t."""
    w = (A.weights > t).astype(float)
    np.fill_diagonal(w, 0.0)
    return WeightedGraph(w, family_hint="bernoulli")


def exceedance_prob(mean: float, variance: float, t: float) -> float:
    """P(X > t) for X ~ N(mean, variance)."""
    if not variance > 0:
        raise ValueError("variance must be positive")
    # ndtr(-u) keeps full relative accuracy in the upper tail
    return float(ndtr(-(t - mean) / math.sqrt(variance)))


@dataclass
class ThresholdFit:
    threshold: float
    result: FitResult


def fit_thresholded_sbm(A: WeightedGraph, plan: ThresholdPlan, k: int, config: FitConfig | None = None) -> list[ThresholdFit]:
    """Binarise at each threshold and fit the Bernoulli model (best ELBO over restarts)."""
    base = config if config is not None else FitConfig(k=k, family="bernoulli")
    config = replace(base, k=k, family="bernoulli", tau0=None if base.family.name != "bernoulli" else base.tau0, mu0=None)
    return [ThresholdFit(t, fit(threshold_graph(A, t), config)) for t in plan.resolve(A)]


def _rows(A) -> np.ndarray:
    w = np.array(A.weights if isinstance(A, WeightedGraph) else A, dtype=float)
    np.fill_diagonal(w, 0.0)
    return w


def kmeans_labels(A, k: int, restarts: int = 10, seed: int = 0) -> np.ndarray:
    """Adjacency rows projected on the top-k principal components, then k-means++ / Lloyd."""
    X = _rows(A)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in 1..{n}")
    if k == 1:
        return np.ones(n, dtype=np.int64)
    Y = PCA(n_components=k, svd_solver="full").fit_transform(X)
    km = KMeans(n_clusters=k, init="k-means++", n_init=restarts, algorithm="lloyd", random_state=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        labels = km.fit_predict(Y)
    return labels.astype(np.int64) + 1


def hierarchical_labels(A, k: int) -> np.ndarray:
    """Average-linkage agglomeration on Euclidean row distances, cut at k clusters."""
    X = _rows(A)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in 1..{n}")
    if k == 1:
        return np.ones(n, dtype=np.int64)
    Z = linkage(pdist(X, metric="euclidean"), method="average")
    return cut_tree(Z, n_clusters=k).ravel().astype(np.int64) + 1
