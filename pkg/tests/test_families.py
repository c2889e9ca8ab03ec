import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import digamma, gammaln

from oracles import central_gradient, normal_log_marginal_quad, normal_log_partition_quad
from strategies import proper_tau, random_proper_tau, support_value
from wsbm.families import FAMILY_NAMES, DomainError, SupportError, get_family

FAMILIES = list(FAMILY_NAMES)


@pytest.mark.parametrize("name", FAMILIES)
def test_dims_and_trailing_count(name):
    fam = get_family(name)
    assert fam.dim == (3 if name == "normal" else 2)
    T = fam.suff_stat(np.array([0.0, 1.0, 1.0]))
    assert T.shape == (3, fam.dim)
    assert np.all(T[:, -1] == 1.0)


@pytest.mark.parametrize(
    "name, x, expected",
    [("normal", 2.0, [2, 4, 1]), ("bernoulli", 0.0, [0, 1]), ("poisson", 3.0, [3, 1]), ("exponential", 2.5, [2.5, 1])],
)
def test_suff_stat_examples(name, x, expected):
    np.testing.assert_array_equal(get_family(name).suff_stat(x), expected)


@pytest.mark.parametrize(
    "name, x",
    [("bernoulli", 0.5), ("bernoulli", 2.0), ("poisson", 1.5), ("poisson", -1.0), ("exponential", -0.1), ("normal", np.inf)],
)
def test_support_violations_name_family_and_value(name, x):
    with pytest.raises(SupportError, match=name):
        get_family(name).suff_stat(x)
    with pytest.raises(SupportError):
        get_family(name).log_h(x)


def test_log_h():
    assert get_family("poisson").log_h(3.0) == pytest.approx(-math.log(6), abs=1e-15)
    assert get_family("poisson").log_h(0.0) == 0.0
    assert get_family("normal").log_h(-7.3) == 0.0
    assert get_family("bernoulli").log_h(1.0) == 0.0
    assert get_family("exponential").log_h(4.0) == 0.0


def test_log_partition_examples():
    bern = get_family("bernoulli")
    assert bern.log_partition([0.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert bern.log_partition([1.0, 1.0]) == pytest.approx(math.log(0.5), abs=1e-15)
    # quadrature over (mean, precision) gives log 2 for tau = (0, 1, 1)
    assert normal_log_partition_quad((0.0, 1.0, 1.0)) == pytest.approx(math.log(2), abs=1e-10)
    assert get_family("normal").log_partition([0.0, 1.0, 1.0]) == pytest.approx(math.log(2), abs=1e-13)


@pytest.mark.parametrize("tau", [(0, 1, 1), (70, 4903, 2), (1.3, 2.5, 0.7), (-3, 20, 4), (5, 30, 0.9)])
def test_normal_log_partition_matches_quadrature(tau):
    assert get_family("normal").log_partition(tau) == pytest.approx(normal_log_partition_quad(tau), abs=1e-9)


def test_expected_eta_examples():
    np.testing.assert_allclose(get_family("bernoulli").expected_eta([0.0, 0.0]), [0.0, -1.0], atol=1e-14)
    euler_gamma = float(mpmath.euler)
    np.testing.assert_allclose(get_family("poisson").expected_eta([0.0, 1.0]), [-euler_gamma, -1.0], atol=1e-14)


@pytest.mark.parametrize(
    "name, tau, constraint",
    [
        ("bernoulli", [-1.0, 0.0], "tau1"),
        ("bernoulli", [0.0, -1.0], "tau2-tau1"),
        ("poisson", [0.0, 0.0], "tau2>0"),
        ("exponential", [0.0, 1.0], "tau1>0"),
        ("exponential", [1.0, -1.0], "tau2"),
        ("normal", [0.0, 1.0, 0.0], "tau3"),
        ("normal", [2.0, 1.0, 1.0], "tau2-tau1"),
    ],
)
def test_improper_tau_identifies_constraint(name, tau, constraint):
    fam = get_family(name)
    with pytest.raises(DomainError, match=constraint):
        fam.log_partition(tau)
    with pytest.raises(DomainError):
        fam.expected_eta(tau)


@pytest.mark.parametrize("name", FAMILIES)
def test_gradient_consistency_random(name):
    fam = get_family(name)
    rng = np.random.default_rng(7)
    for _ in range(100):
        tau = random_proper_tau(name, rng)
        grad = fam.expected_eta(tau)
        fd = central_gradient(fam.log_partition, tau, 1e-5)
        assert np.linalg.norm(grad - fd) / (1 + np.linalg.norm(grad)) < 1e-5


@pytest.mark.parametrize("name", FAMILIES)
def test_default_prior_is_proper(name):
    fam = get_family(name)
    assert fam.proper_mask(np.array(fam.default_tau0))


@pytest.mark.parametrize("name", FAMILIES)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_pseudo_observation_additivity(name, data):
    fam = get_family(name)
    tau = data.draw(proper_tau(name))
    x = data.draw(support_value(name))
    fam.check_tau(tau + fam.suff_stat(x))


@pytest.mark.parametrize("name", FAMILIES)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_log_partition_convex_on_segments(name, data):
    fam = get_family(name)
    t1, t2 = data.draw(proper_tau(name)), data.draw(proper_tau(name))
    mid = fam.log_partition((t1 + t2) / 2)
    assert mid <= (fam.log_partition(t1) + fam.log_partition(t2)) / 2 + 1e-9


def _log_marginal_closed(fam, tau, x):
    return fam.log_h(x) + fam.log_partition(tau + fam.suff_stat(x)) - fam.log_partition(tau)


def _log_marginal_1d(fam, tau, x, lo, hi, theta_to_phi, density):
    """Single-parameter families: prior exp(tau . eta) normalised by quadrature."""
    def prior(th):
        return math.exp(float(np.dot(tau, fam.eta(theta_to_phi(th)))))

    z, _ = integrate.quad(prior, lo, hi, epsabs=0, epsrel=1e-12, limit=200)
    m, _ = integrate.quad(lambda th: density(x, th) * prior(th), lo, hi, epsabs=0, epsrel=1e-12, limit=200)
    return math.log(m) - math.log(z)


def _random_cases(name, rng):
    for _ in range(10):
        if name == "bernoulli":
            a, b = rng.uniform(1.0, 6.0, 2)
            yield np.array([a - 1, a + b - 2]), float(rng.integers(0, 2))
        elif name == "poisson":
            yield np.array([rng.uniform(0.0, 5.0), rng.uniform(0.5, 3.0)]), float(rng.integers(0, 8))
        elif name == "exponential":
            yield np.array([rng.uniform(0.5, 3.0), rng.uniform(0.0, 5.0)]), float(rng.uniform(0.0, 4.0))
        else:
            cnt, m, b = rng.uniform(0.5, 4.0), rng.uniform(-2, 2), rng.uniform(0.5, 3.0)
            yield np.array([m * cnt, 2 * b + m * m * cnt, cnt]), float(rng.normal(m, 1.5))


@pytest.mark.parametrize("name", FAMILIES)
def test_exact_conjugate_update_matches_integration(name):
    fam = get_family(name)
    rng = np.random.default_rng(3)
    for tau, x in _random_cases(name, rng):
        closed = _log_marginal_closed(fam, tau, x)
        if name == "bernoulli":
            ref = _log_marginal_1d(fam, tau, x, 0, 1, lambda p: {"p": p}, lambda x, p: p if x == 1 else 1 - p)
        elif name == "poisson":
            ref = _log_marginal_1d(fam, tau, x, 0, np.inf, lambda lam: {"rate": lam},
                                   lambda x, lam: math.exp(x * math.log(lam) - lam - math.lgamma(x + 1)))
        elif name == "exponential":
            ref = _log_marginal_1d(fam, tau, x, 0, np.inf, lambda lam: {"rate": lam},
                                   lambda x, lam: lam * math.exp(-lam * x))
        else:
            ref = normal_log_marginal_quad([x], tau)
        assert math.exp(closed) == pytest.approx(math.exp(ref), rel=1e-6)


def test_special_functions_against_mpmath():
    mpmath.mp.dps = 40
    xs = np.concatenate([np.geomspace(1e-3, 1e6, 300), [0.5, 3.0, 10.0]])
    for x in xs:
        ref_lg = float(mpmath.loggamma(x))
        ref_dg = float(mpmath.digamma(x))
        # relative accuracy away from the zeros of lnGamma (1, 2) and psi (~1.4616)
        assert abs(gammaln(x) - ref_lg) <= 1e-12 * max(abs(ref_lg), 1e-2)
        assert abs(digamma(x) - ref_dg) <= 1e-12 * max(abs(ref_dg), 1e-2)


def test_sample_weight():
    rng = np.random.default_rng(0)
    assert get_family("bernoulli").sample({"p": 1.0}, rng) == 1.0
    assert get_family("bernoulli").sample({"p": 0.0}, rng) == 0.0
    draws = get_family("normal").sample({"mean": 35.0, "variance": 2500.0}, np.random.default_rng(1), 100_000)
    assert abs(draws.mean() - 35.0) < 1.0
    assert abs(draws.var() - 2500.0) < 150.0
    a = get_family("poisson").sample({"rate": 3.0}, np.random.default_rng(5), 10)
    b = get_family("poisson").sample({"rate": 3.0}, np.random.default_rng(5), 10)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize(
    "name, phi",
    [("bernoulli", {"p": 1.5}), ("poisson", {"rate": 0.0}), ("exponential", {"rate": -1.0}), ("normal", {"mean": 0.0, "variance": 0.0})],
)
def test_sample_rejects_invalid_phi(name, phi):
    with pytest.raises(DomainError):
        get_family(name).sample(phi, np.random.default_rng(0))


def test_posterior_mean_examples():
    assert get_family("bernoulli").posterior_mean([1.0, 2.0])["p"] == pytest.approx(0.5)
    assert get_family("poisson").posterior_mean([4.0, 2.0])["rate"] == pytest.approx(2.5)
    assert get_family("exponential").posterior_mean([2.0, 3.0])["rate"] == pytest.approx(2.0)
    nm = get_family("normal").posterior_mean([70.0, 4903.0, 2.0])
    assert nm["mean"] == pytest.approx(35.0)
    # shape a = 1.5, rate b = (4903 - 2450) / 2, E[1/t] = b / (a - 1)
    assert nm["variance"] == pytest.approx((4903 - 2450) / 2 / 0.5)
    assert math.isnan(get_family("normal").posterior_mean([0.0, 1.0, 1.0])["variance"])


def test_get_family():
    assert get_family("Normal").name == "normal"
    with pytest.raises(ValueError, match="unknown family"):
        get_family("gamma")
