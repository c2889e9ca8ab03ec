"""Planted-partition weighted graph generator."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .families import ExponentialFamily, get_family
from .graph import WeightedGraph, bundle_lookup, n_bundles

__all__ = ["GeneratorSpec", "block_sizes", "generate", "default_testbed", "two_block_demo", "spec_from_config"]


def block_sizes(n: int, proportions) -> np.ndarray:
    """Integer block sizes summing to n (largest-remainder rounding)."""
    p = np.asarray(proportions, dtype=float)
    raw = p * n
    sizes = np.floor(raw).astype(np.int64)
    short = n - sizes.sum()
    order = np.argsort(-(raw - sizes), kind="stable")
    sizes[order[:short]] += 1
    return sizes


@dataclass
class GeneratorSpec:
    n: int
    k: int
    family: ExponentialFamily | str
    bundle_params: list[dict]
    proportions: list[float] | None = None
    seed: int = 0

    def __post_init__(self):
        self.family = get_family(self.family)
        if self.k < 1 or self.n < 1:
            raise ValueError("n and k must be positive")
        if self.proportions is None:
            self.proportions = [1.0 / self.k] * self.k
        p = np.asarray(self.proportions, dtype=float)
        if p.shape != (self.k,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("proportions must be k non-negative fractions summing to 1")
        if len(self.bundle_params) != n_bundles(self.k):
            raise ValueError(f"need {n_bundles(self.k)} bundle parameter sets, got {len(self.bundle_params)}")
        self.bundle_params = [self.family.check_phi(phi) for phi in self.bundle_params]
        self.proportions = [float(x) for x in p]

    @property
    def sizes(self) -> np.ndarray:
        return block_sizes(self.n, self.proportions)

    def labels(self) -> np.ndarray:
        """Planted 1-based labels in contiguous runs."""
        return np.repeat(np.arange(1, self.k + 1), self.sizes)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "family": self.family.name,
            "proportions": list(self.proportions),
            "bundle_params": [dict(phi) for phi in self.bundle_params],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorSpec":
        return cls(
            n=int(doc["n"]),
            k=int(doc["k"]),
            family=doc["family"],
            bundle_params=list(doc["bundle_params"]),
            proportions=doc.get("proportions"),
            seed=int(doc.get("seed", 0)),
        )


def generate(spec: GeneratorSpec) -> tuple[WeightedGraph, np.ndarray]:
    """Draw a graph with independent weights for every pair i < j."""
    rng = np.random.default_rng(spec.seed)
    z = spec.labels()
    iu, ju = np.triu_indices(spec.n, 1)
    bundle = bundle_lookup(spec.k)[z[iu] - 1, z[ju] - 1]
    upper = np.empty(iu.size)
    for r, phi in enumerate(spec.bundle_params):
        sel = bundle == r
        upper[sel] = spec.family.sample(phi, rng, int(sel.sum()))
    w = np.zeros((spec.n, spec.n))
    w[iu, ju] = upper
    w[ju, iu] = upper
    return WeightedGraph(w, family_hint=spec.family.name), z


def default_testbed(n: int = 160, variance: float = 100.0, seed: int = 0) -> GeneratorSpec:
    """Five equal Normal blocks; bundle r (1-based) has mean 10 r, shared variance."""
    if n < 5:
        raise ValueError("testbed needs n >= 5")
    if not variance > 0:
        raise ValueError("variance must be positive")
    k = 5
    params = [{"mean": 10.0 * r, "variance": float(variance)} for r in range(1, n_bundles(k) + 1)]
    return GeneratorSpec(n=n, k=k, family="normal", bundle_params=params, seed=seed)


def two_block_demo(n: int = 160, variance: float = 25.0, seed: int = 0) -> GeneratorSpec:
    """Two equal Normal blocks: within-block mean 35, between-block mean 65."""
    if n < 2 or n % 2:
        raise ValueError("two-block demo needs an even n >= 2")
    if not variance > 0:
        raise ValueError("variance must be positive")
    v = float(variance)
    params = [{"mean": 35.0, "variance": v}, {"mean": 65.0, "variance": v}, {"mean": 35.0, "variance": v}]
    return GeneratorSpec(n=n, k=2, family="normal", bundle_params=params, seed=seed)


_PRESETS = {"testbed": default_testbed, "two_block": two_block_demo}


def spec_from_config(doc: dict) -> GeneratorSpec:
    """Build a spec from a JSON config: either a full spec or a preset.

    Preset form: ``{"preset": "testbed" | "two_block", "n": .., "variance": .., "seed": ..}``.
    """
    if not isinstance(doc, dict):
        raise ValueError("generator config must be a JSON object")
    if "preset" in doc:
        try:
            make = _PRESETS[doc["preset"]]
        except KeyError:
            raise ValueError(f"unknown preset {doc['preset']!r}; expected one of {sorted(_PRESETS)}") from None
        kwargs = {key: doc[key] for key in ("n", "variance", "seed") if key in doc}
        return make(**kwargs)
    try:
        return GeneratorSpec.from_dict(doc)
    except KeyError as exc:
        raise ValueError(f"generator config missing key {exc}") from None


def load_spec(path) -> GeneratorSpec:
    return spec_from_config(json.loads(Path(path).read_text(encoding="utf-8")))
