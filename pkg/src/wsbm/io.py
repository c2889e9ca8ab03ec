"""FitResult JSON documents (schema version 1)."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .families import get_family
from .graph import n_bundles
from .metrics import hard_assignment
from .vb import FitResult, VariationalState

__all__ = ["SchemaError", "SCHEMA_VERSION", "fit_to_dict", "fit_from_dict", "save_fit", "load_fit"]

SCHEMA_VERSION = 1

_KEYS = ("version", "family", "k", "n", "elbo", "mu", "tau", "z", "iterations", "converged", "seed")


class SchemaError(ValueError):
    """A fit document is missing keys, has the wrong version, or violates an invariant."""


def fit_to_dict(result: FitResult) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "family": result.family,
        "k": int(result.k),
        "n": int(result.n),
        "elbo": float(result.elbo),
        "mu": result.state.mu.tolist(),
        "tau": result.state.tau.tolist(),
        "z": [int(v) for v in result.z],
        "iterations": int(result.iterations),
        "converged": bool(result.converged),
        "seed": int(result.seed_used),
    }


def fit_from_dict(doc: dict) -> FitResult:
    if not isinstance(doc, dict):
        raise SchemaError("fit document must be a JSON object")
    missing = [key for key in _KEYS if key not in doc]
    if missing:
        raise SchemaError(f"missing keys: {', '.join(missing)}")
    if doc["version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported version {doc['version']!r}, expected {SCHEMA_VERSION}")
    try:
        fam = get_family(doc["family"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    k, n = doc["k"], doc["n"]
    if not (isinstance(k, int) and isinstance(n, int) and k >= 1 and n >= 1):
        raise SchemaError("k and n must be positive integers")
    mu = np.array(doc["mu"], dtype=float)
    tau = np.array(doc["tau"], dtype=float)
    z = np.array(doc["z"], dtype=np.int64)
    if mu.shape != (n, k):
        raise SchemaError(f"mu has shape {mu.shape}, expected ({n}, {k})")
    if tau.shape != (n_bundles(k), fam.dim):
        raise SchemaError(f"tau has shape {tau.shape}, expected ({n_bundles(k)}, {fam.dim})")
    if z.shape != (n,) or np.any(z < 1) or np.any(z > k):
        raise SchemaError("z must hold n labels in 1..k")
    if np.any(mu < 0) or np.any(np.abs(mu.sum(axis=1) - 1.0) > 1e-6):
        raise SchemaError("mu rows must be non-negative and sum to 1 within 1e-6")
    if not np.array_equal(z, hard_assignment(mu)):
        raise SchemaError("z is not the row-wise argmax of mu")
    elbo = float(doc["elbo"])
    if not np.isfinite(elbo):
        raise SchemaError("elbo must be finite")
    try:
        eta = fam.expected_eta(tau)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    # tau0 is not stored, so <T> cannot be recovered from the document
    state = VariationalState(mu=mu, tau=tau, expected_T=np.full_like(tau, np.nan), expected_eta=eta)
    return FitResult(
        state=state,
        elbo=elbo,
        z=z,
        iterations=int(doc["iterations"]),
        converged=bool(doc["converged"]),
        seed_used=int(doc["seed"]),
        family=fam.name,
        k=k,
    )


def save_fit(path, result: FitResult) -> None:
    Path(path).write_text(json.dumps(fit_to_dict(result), indent=1) + "\n", encoding="utf-8")


def load_fit(path) -> FitResult:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return fit_from_dict(doc)
