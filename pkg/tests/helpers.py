import numpy as np

from wsbm.graph import WeightedGraph


def planted_binary(n=20, k=2):
    """Noiseless planted partition: weight 1 within blocks, 0 between."""
    z = np.repeat(np.arange(1, k + 1), n // k)
    w = (z[:, None] == z[None, :]).astype(float)
    np.fill_diagonal(w, 0.0)
    return WeightedGraph(w, family_hint="bernoulli"), z


def random_graph(family, n, rng):
    """Symmetric random weights in the support of ``family``."""
    if family == "bernoulli":
        x = (rng.random((n, n)) < 0.4).astype(float)
    elif family == "poisson":
        x = rng.poisson(3.0, (n, n)).astype(float)
    elif family == "exponential":
        x = rng.exponential(2.0, (n, n))
    else:
        x = rng.normal(0.0, 1.0, (n, n))
    w = np.triu(x, 1)
    return WeightedGraph(w + w.T)


def random_planted(family, n, k, rng):
    """Graph drawn from a random k-block planted model."""
    from wsbm.graph import n_bundles
    from wsbm.synth import GeneratorSpec, generate

    R = n_bundles(k)
    if family == "bernoulli":
        params = [{"p": p} for p in rng.uniform(0.05, 0.95, R)]
    elif family in ("poisson", "exponential"):
        params = [{"rate": r} for r in rng.uniform(0.5, 6.0, R)]
    else:
        params = [{"mean": m, "variance": v} for m, v in zip(rng.uniform(-3, 3, R), rng.uniform(0.3, 3.0, R))]
    spec = GeneratorSpec(n=n, k=k, family=family, bundle_params=params, seed=int(rng.integers(2**31)))
    return generate(spec)
