"""Variational Bayes coordinate ascent for the weighted SBM on dense graphs.

The posterior over labels and bundle parameters is approximated by

    q(z, theta) = prod_i mu_i(z_i) * prod_r exp(tau_r . eta(theta_r)) / Z(tau_r)

and fitted by alternating exact tau updates with sequential (Gauss-Seidel)
sweeps over the vertex marginals. All bundle sums run over unordered pairs
i < j, so every pair contributes exactly one observation.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._kernels import gauss_seidel_sweeps
from .families import DomainError, ExponentialFamily, get_family
from .graph import WeightedGraph, bundle_lookup, bundle_pairs, n_bundles
from .metrics import hard_assignment

__all__ = [
    "VariationalState",
    "FitConfig",
    "FitResult",
    "CacheError",
    "expected_bundle_stats",
    "update_tau",
    "update_mu_sweep",
    "elbo",
    "fit",
    "fit_run",
    "refine",
    "split_proposals",
    "with_k",
]

log = logging.getLogger(__name__)


class CacheError(RuntimeError):
    """Cached expectations do not match the state they were derived from."""


@dataclass
class VariationalState:
    mu: np.ndarray
    tau: np.ndarray
    expected_T: np.ndarray
    expected_eta: np.ndarray

    def copy(self) -> "VariationalState":
        return VariationalState(self.mu.copy(), self.tau.copy(), self.expected_T.copy(), self.expected_eta.copy())


@dataclass
class FitConfig:
    k: int
    family: ExponentialFamily | str = "normal"
    tau0: np.ndarray | None = None
    mu0: np.ndarray | None = None
    inner_tol: float = 1e-6
    outer_tol: float = 1e-8
    max_inner: int = 50
    max_outer: int = 200
    restarts: int = 10
    seed: int = 0
    refine_rounds: int = 10

    def __post_init__(self):
        self.family = get_family(self.family)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not (self.inner_tol > 0 and self.outer_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_inner < 1 or self.max_outer < 1 or self.restarts < 1:
            raise ValueError("iteration caps and restarts must be >= 1")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        tau0 = self.family.default_tau0 if self.tau0 is None else self.tau0
        self.tau0 = self.family.check_tau(np.array(tau0, dtype=float))
        if self.mu0 is None:
            self.mu0 = np.full(self.k, 1.0 / self.k)
        else:
            mu0 = np.asarray(self.mu0, dtype=float)
            if mu0.shape != (self.k,) or np.any(mu0 < 0) or abs(mu0.sum() - 1.0) > 1e-12:
                raise ValueError("mu0 must be a probability vector of length k")
            self.mu0 = mu0


@dataclass
class FitResult:
    state: VariationalState
    elbo: float
    z: np.ndarray
    iterations: int
    converged: bool
    seed_used: int
    family: str
    k: int
    elbo_trace: list[float] = field(default_factory=list)
    graph_fingerprint: str | None = None

    @property
    def mu(self) -> np.ndarray:
        return self.state.mu

    @property
    def tau(self) -> np.ndarray:
        return self.state.tau

    @property
    def n(self) -> int:
        return self.state.mu.shape[0]

    def posterior_means(self) -> list[dict]:
        fam = get_family(self.family)
        return [fam.posterior_mean(t) for t in self.state.tau]


# -- helpers -----------------------------------------------------------------

def _as_graph(A, family: ExponentialFamily | None = None) -> WeightedGraph:
    return A if isinstance(A, WeightedGraph) else WeightedGraph(np.asarray(A, dtype=float))


def _stats_tensor(A: WeightedGraph, family: ExponentialFamily) -> np.ndarray:
    """(d, n, n) contiguous statistics tensor."""
    return np.ascontiguousarray(np.moveaxis(A.suff_stats(family), -1, 0))


def _bundle_stats(T: np.ndarray, mu: np.ndarray) -> np.ndarray:
    # S_c = mu^T T_c mu sums over ordered pairs; off-diagonal blocks equal the
    # symmetrised unordered-pair weight, diagonal blocks count each pair twice.
    k = mu.shape[1]
    S = np.einsum("ia,cij,jb->abc", mu, T, mu, optimize=True)
    out = np.empty((n_bundles(k), T.shape[0]))
    for r, (a, b) in enumerate(bundle_pairs(k)):
        out[r] = S[a - 1, b - 1] if a != b else 0.5 * S[a - 1, a - 1]
    return out


def _check_mu(mu: np.ndarray, n: int, k: int) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n, k):
        raise ValueError(f"mu must have shape ({n}, {k}), got {mu.shape}")
    if np.any(mu < 0) or not np.allclose(mu.sum(axis=1), 1.0, rtol=0, atol=1e-9):
        raise ValueError("mu rows must be non-negative and sum to 1")
    return mu


def _entropy_term(mu: np.ndarray, mu0: np.ndarray) -> float:
    # sum_i sum_z mu log(mu0/mu) with 0 log 0 = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mu > 0, mu * (np.log(mu0)[None, :] - np.log(mu)), 0.0)
    return float(terms.sum())


def _elbo(log_h_total, ET, tau, Eeta, tau0, mu, mu0, family) -> float:
    middle = float(np.sum((ET + tau0[None, :] - tau) * Eeta))
    logz = float(np.sum(family._log_partition(tau) - family._log_partition(tau0)))
    return log_h_total + middle + logz + _entropy_term(mu, mu0)


# -- public operations -----------------------------------------------------------

def expected_bundle_stats(A, mu, family, k: int) -> np.ndarray:
    """Expected bundle statistics <T>_r as an R x d matrix.

    Bundle r = (a, b) collects, for every pair i < j, the weight
    mu_i(a) mu_j(b) + mu_i(b) mu_j(a) (a != b) or mu_i(a) mu_j(a) (a == b).
    """
    fam = get_family(family)
    A = _as_graph(A)
    mu = _check_mu(mu, A.n, k)
    return _bundle_stats(_stats_tensor(A, fam), mu)


def update_tau(expected_T, tau0, family=None) -> np.ndarray:
    """tau_r = tau0 + <T>_r; raises DomainError if a row comes out improper."""
    expected_T = np.asarray(expected_T, dtype=float)
    tau0 = np.asarray(tau0, dtype=float)
    if not np.all(np.isfinite(expected_T)):
        raise ValueError("expected statistics must be finite")
    tau = tau0[None, :] + expected_T
    if family is not None:
        fam = get_family(family)
        try:
            fam.check_tau(tau)
        except DomainError as exc:
            raise DomainError(f"posterior tau improper, check weights against the family support: {exc}") from exc
    return tau


def update_mu_sweep(A, state: VariationalState, family, k: int, inner_tol: float = 1e-6,
                    max_inner: int = 50, mu0=None, _T=None):
    """Sequential sweeps over vertices until the largest mu change is < inner_tol.

    Returns ``(mu, converged, sweeps)``; ``state.mu`` is not modified.
    """
    fam = get_family(family)
    A = _as_graph(A)
    T = _stats_tensor(A, fam) if _T is None else _T
    mu = np.array(_check_mu(state.mu, A.n, k), dtype=float, order="C")
    mu0 = np.full(k, 1.0 / k) if mu0 is None else np.asarray(mu0, dtype=float)
    E = np.ascontiguousarray(state.expected_eta[bundle_lookup(k)])
    if not np.all(np.isfinite(E)):
        raise FloatingPointError("expected natural parameters are not finite")
    with np.errstate(divide="ignore"):
        log_mu0 = np.log(mu0)
    sweeps, converged = gauss_seidel_sweeps(T, mu, E, log_mu0, float(inner_tol), int(max_inner))
    if not np.all(np.isfinite(mu)):
        raise FloatingPointError("vertex scores became non-finite")
    return mu, bool(converged), int(sweeps)


def elbo(A, state: VariationalState, family, tau0, mu0=None) -> float:
    """Evidence lower bound G for a consistent state."""
    fam = get_family(family)
    A = _as_graph(A)
    n, k = state.mu.shape
    T = _stats_tensor(A, fam)
    mu0 = np.full(k, 1.0 / k) if mu0 is None else np.asarray(mu0, dtype=float)
    tau0 = np.asarray(tau0, dtype=float)
    if not np.allclose(_bundle_stats(T, state.mu), state.expected_T, rtol=1e-9, atol=1e-9):
        raise CacheError("cached expected_T does not match mu")
    if not np.allclose(fam.expected_eta(state.tau), state.expected_eta, rtol=1e-12, atol=1e-12):
        raise CacheError("cached expected_eta does not match tau")
    return _elbo(A.log_h_total(fam), state.expected_T, state.tau, state.expected_eta, tau0, state.mu, mu0, fam)


@dataclass
class _Prepared:
    graph: WeightedGraph
    family: ExponentialFamily
    T: np.ndarray
    log_h_total: float


def _prepare(A, family) -> _Prepared:
    fam = get_family(family)
    A = _as_graph(A)
    if A.n < 2:
        raise ValueError("need at least 2 vertices")
    T = _stats_tensor(A, fam)
    return _Prepared(A, fam, T, A.log_h_total(fam))


def _coordinate_ascent(prep: _Prepared, config: FitConfig, mu: np.ndarray, seed: int) -> FitResult:
    fam, T, k = prep.family, prep.T, config.k
    mu = np.ascontiguousarray(mu, dtype=float)
    trace: list[float] = []
    converged = False
    state = None
    for it in range(1, config.max_outer + 1):
        ET = _bundle_stats(T, mu)
        tau = update_tau(ET, config.tau0, fam)
        Eeta = fam._expected_eta(tau)
        state = VariationalState(mu, tau, ET, Eeta)
        G = _elbo(prep.log_h_total, ET, tau, Eeta, config.tau0, mu, config.mu0, fam)
        if trace and abs(G - trace[-1]) <= config.outer_tol * abs(trace[-1]):
            trace.append(G)
            converged = True
            break
        trace.append(G)
        if it == config.max_outer:
            break
        mu, _, _ = update_mu_sweep(prep.graph, state, fam, k, config.inner_tol, config.max_inner,
                                   mu0=config.mu0, _T=T)
    if not np.isfinite(trace[-1]):
        raise FloatingPointError("ELBO is not finite")
    return FitResult(
        state=state,
        elbo=trace[-1],
        z=hard_assignment(state.mu),
        iterations=len(trace),
        converged=converged,
        seed_used=int(seed),
        family=fam.name,
        k=k,
        elbo_trace=trace,
        graph_fingerprint=prep.graph.fingerprint,
    )


def fit_run(A, config: FitConfig, seed: int, init_mu=None, _prep: _Prepared | None = None) -> FitResult:
    """One coordinate-ascent run.

    mu starts from ``init_mu`` if given, otherwise each row is drawn from a
    symmetric Dirichlet(1) using ``seed``. The loop alternates
    <T> -> tau -> <eta> -> G, stopping once G changes by less than
    ``outer_tol`` relative, and otherwise running mu sweeps.
    """
    prep = _prep or _prepare(A, config.family)
    n, k = prep.graph.n, config.k
    if init_mu is None:
        mu = np.random.default_rng(seed).dirichlet(np.ones(k), size=n)
    else:
        mu = _check_mu(init_mu, n, k)
    return _coordinate_ascent(prep, config, mu, seed)


def _two_means_1d(p: np.ndarray) -> np.ndarray:
    """Boolean mask of the upper group of the least-squares two-way cut of p."""
    order = np.argsort(p, kind="stable")
    ps = p[order]
    m = ps.size
    csum, csq = np.cumsum(ps), np.cumsum(ps * ps)
    cut = np.arange(1, m)
    left = csq[:-1] - csum[:-1] ** 2 / cut
    right = (csq[-1] - csq[:-1]) - (csum[-1] - csum[:-1]) ** 2 / (m - cut)
    best = int(np.argmin(left + right)) + 1
    mask = np.zeros(m, dtype=bool)
    mask[order[best:]] = True
    return mask


def split_proposals(weights: np.ndarray, z: np.ndarray, k: int):
    """Hard relabelings that re-seed the smallest block.

    For each other block c (largest first), the members of c and of the
    smallest block t are pooled and cut in two along the leading principal
    component of their adjacency rows; one side keeps label c, the other
    takes t. Labels are 1-based.
    """
    sizes = np.bincount(z - 1, minlength=k)
    t = int(np.argmin(sizes))
    for c in np.argsort(-sizes, kind="stable"):
        c = int(c)
        if c == t or sizes[c] < 2:
            continue
        members = np.flatnonzero((z == c + 1) | (z == t + 1))
        X = weights[members] - weights[members].mean(axis=0)
        _, _, vt = np.linalg.svd(X, full_matrices=False)
        upper = _two_means_1d(X @ vt[0])
        proposal = z.copy()
        proposal[members] = c + 1
        proposal[members[upper]] = t + 1
        yield proposal


def refine(A, config: FitConfig, result: FitResult, _prep: _Prepared | None = None) -> FitResult:
    """Greedy split refinement of a converged fit.

    Each proposal from ``split_proposals`` starts a fresh coordinate-ascent
    run; the best run is kept if it raises G by more than ``outer_tol``
    relative. Repeats until nothing improves or ``config.refine_rounds``.
    """
    prep = _prep or _prepare(A, config.family)
    k = config.k
    if k < 2:
        return result
    eye = np.eye(k)
    for _ in range(config.refine_rounds):
        best = None
        for z in split_proposals(np.asarray(prep.graph.weights), result.z, k):
            cand = _coordinate_ascent(prep, config, eye[z - 1], result.seed_used)
            if cand.elbo > result.elbo + config.outer_tol * abs(result.elbo):
                if best is None or cand.elbo > best.elbo:
                    best = cand
        if best is None:
            break
        log.debug("split refinement: G %.10g -> %.10g", result.elbo, best.elbo)
        result = best
    return result


def fit(A, config: FitConfig) -> FitResult:
    """Best-ELBO result over ``config.restarts`` runs seeded seed, seed+1, ...

    Ties go to the lowest seed. The winner is then passed through
    ``refine`` unless ``config.refine_rounds`` is 0.
    """
    prep = _prepare(A, config.family)
    if config.k > prep.graph.n:
        warnings.warn(f"k={config.k} exceeds n={prep.graph.n}; some blocks will be empty", stacklevel=2)
    best = None
    for s in range(config.seed, config.seed + config.restarts):
        res = fit_run(prep.graph, config, s, _prep=prep)
        log.debug("seed %d: G=%.10g after %d iterations", s, res.elbo, res.iterations)
        if best is None or res.elbo > best.elbo:
            best = res
    return refine(prep.graph, config, best, _prep=prep)


def with_k(config: FitConfig, k: int) -> FitConfig:
    """Copy of ``config`` for another block count (mu0 reset to uniform)."""
    return replace(config, k=k, mu0=None)
