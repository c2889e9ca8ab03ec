"""Hypothesis strategies and samplers for proper conjugate parameters."""
import numpy as np
from hypothesis import strategies as st

positive = st.floats(min_value=0.1, max_value=50.0)
location = st.floats(min_value=-20.0, max_value=20.0)


@st.composite
def proper_tau(draw, family):
    if family == "bernoulli":
        a, b = draw(positive), draw(positive)
        return np.array([a - 1, a + b - 2])
    if family == "poisson":
        a, rate = draw(positive), draw(positive)
        return np.array([a - 1, rate])
    if family == "exponential":
        shape, rate = draw(positive), draw(positive)
        return np.array([rate, shape - 1])
    count, m, b = draw(positive), draw(location), draw(positive)
    return np.array([m * count, 2 * b + m * m * count, count])


def random_proper_tau(family, rng):
    """Proper tau drawn from a numpy Generator (finite-difference friendly ranges)."""
    u = lambda: float(np.exp(rng.uniform(np.log(0.1), np.log(50.0))))
    if family == "bernoulli":
        a, b = u(), u()
        return np.array([a - 1, a + b - 2])
    if family == "poisson":
        return np.array([u() - 1, u()])
    if family == "exponential":
        return np.array([u(), u() - 1])
    # keep the spread b away from 0 relative to the mean: a fixed-step finite
    # difference loses accuracy as (mean / b)^3 grows
    count, m, b = u(), rng.uniform(-5, 5), float(np.exp(rng.uniform(np.log(0.5), np.log(50.0))))
    return np.array([m * count, 2 * b + m * m * count, count])


def support_value(family):
    return {
        "bernoulli": st.sampled_from([0.0, 1.0]),
        "poisson": st.integers(min_value=0, max_value=200).map(float),
        "exponential": st.floats(min_value=0.0, max_value=1e3),
        "normal": st.floats(min_value=-1e3, max_value=1e3),
    }[family]
