"""Exponential families with conjugate priors used as edge-weight models.

Every family carries a sufficient statistic whose last component is the
constant 1, so a conjugate update ``tau + sum(T(x))`` also counts
observations. ``tau`` lives in the conjugate-prior parameter space::

    prior(theta) = exp(tau . eta(theta)) / Z(tau)

and ``expected_eta`` is the gradient of ``log Z``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma, gammaln

__all__ = [
    "FAMILY_NAMES",
    "DomainError",
    "SupportError",
    "ExponentialFamily",
    "Bernoulli",
    "Poisson",
    "Exponential",
    "Normal",
    "get_family",
]

FAMILY_NAMES = ("bernoulli", "poisson", "exponential", "normal")

LOG_2PI = math.log(2.0 * math.pi)


class SupportError(ValueError):
    """A weight lies outside the support of the declared family."""


class DomainError(ValueError):
    """A conjugate parameter vector is improper, or native parameters are invalid."""


class ExponentialFamily:
    """Base class. Subclasses define the maps for one family.

    Methods accept scalars or arrays. Weight arrays of shape ``s`` map to
    statistic arrays of shape ``s + (dim,)``; tau arrays of shape
    ``s + (dim,)`` map to log-partition arrays of shape ``s``.
    """

    name: str = ""
    dim: int = 0
    default_tau0: tuple[float, ...] = ()
    param_names: tuple[str, ...] = ()

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExponentialFamily) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    # -- support -----------------------------------------------------------
    def in_support(self, x):
        """Elementwise support predicate."""
        raise NotImplementedError

    def check_support(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        ok = self.in_support(x)
        if not np.all(ok):
            bad = x[~ok] if x.ndim else x
            value = float(np.ravel(bad)[0])
            raise SupportError(f"{self.name}: weight {value!r} is outside the support")
        return x

    # -- maps ----------------------------------------------------------------
    def suff_stat(self, x) -> np.ndarray:
        x = self.check_support(x)
        return self._suff_stat(x)

    def _suff_stat(self, x: np.ndarray) -> np.ndarray:
        # (x, 1) for the one-parameter families
        return np.stack([x, np.ones_like(x)], axis=-1)

    def log_h(self, x):
        x = self.check_support(x)
        out = self._log_h(x)
        return float(out) if out.ndim == 0 else out

    def _log_h(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)

    def proper_mask(self, tau) -> np.ndarray:
        """Elementwise properness of tau rows (no exception)."""
        tau = np.asarray(tau, dtype=float)
        violations = self._violations(tau)
        return ~np.any(np.stack(list(violations.values()), axis=0), axis=0)

    def _violations(self, tau: np.ndarray) -> dict[str, np.ndarray]:
        raise NotImplementedError

    def check_tau(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if tau.shape[-1:] != (self.dim,):
            raise DomainError(f"{self.name}: tau must have trailing length {self.dim}, got shape {tau.shape}")
        if not np.all(np.isfinite(tau)):
            raise DomainError(f"{self.name}: tau has non-finite entries")
        for constraint, bad in self._violations(tau).items():
            if np.any(bad):
                raise DomainError(f"{self.name}: improper tau, constraint {constraint} fails")
        return tau

    def log_partition(self, tau):
        tau = self.check_tau(tau)
        out = self._log_partition(tau)
        return float(out) if out.ndim == 0 else out

    def expected_eta(self, tau) -> np.ndarray:
        tau = self.check_tau(tau)
        return self._expected_eta(tau)

    def _log_partition(self, tau: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _expected_eta(self, tau: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eta(self, phi: dict) -> np.ndarray:
        """Natural-parameter map evaluated at native parameters."""
        raise NotImplementedError

    # -- native parameters ---------------------------------------------------
    def check_phi(self, phi: dict) -> dict:
        raise NotImplementedError

    def sample(self, phi: dict, rng: np.random.Generator, size=None):
        """Draw weights from f(. | phi)."""
        raise NotImplementedError

    def posterior_mean(self, tau) -> dict:
        raise NotImplementedError


class Bernoulli(ExponentialFamily):
    """eta(p) = (logit p, log(1-p)); conjugate Beta(tau1 + 1, tau2 - tau1 + 1)."""

    name = "bernoulli"
    dim = 2
    default_tau0 = (0.0, 0.0)
    param_names = ("p",)

    def in_support(self, x):
        x = np.asarray(x, dtype=float)
        return (x == 0.0) | (x == 1.0)

    def _violations(self, tau):
        return {"tau1+1>0": ~(tau[..., 0] + 1 > 0), "tau2-tau1+1>0": ~(tau[..., 1] - tau[..., 0] + 1 > 0)}

    @staticmethod
    def _ab(tau):
        return tau[..., 0] + 1.0, tau[..., 1] - tau[..., 0] + 1.0

    def _log_partition(self, tau):
        a, b = self._ab(tau)
        return gammaln(a) + gammaln(b) - gammaln(a + b)

    def _expected_eta(self, tau):
        a, b = self._ab(tau)
        return np.stack([digamma(a) - digamma(b), digamma(b) - digamma(a + b)], axis=-1)

    def eta(self, phi):
        p = self.check_phi(phi)["p"]
        return np.array([math.log(p / (1 - p)), math.log1p(-p)])

    def check_phi(self, phi):
        p = float(phi["p"])
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"bernoulli: p={p!r} not in [0, 1]")
        return {"p": p}

    def sample(self, phi, rng, size=None):
        p = self.check_phi(phi)["p"]
        return np.asarray(rng.random(size) < p, dtype=float)[()]

    def posterior_mean(self, tau):
        a, b = self._ab(self.check_tau(tau))
        return {"p": float(a / (a + b))}


class Poisson(ExponentialFamily):
    """eta(lam) = (log lam, -lam); conjugate Gamma(shape tau1 + 1, rate tau2)."""

    name = "poisson"
    dim = 2
    default_tau0 = (0.0, 0.1)
    param_names = ("rate",)

    def in_support(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            return np.isfinite(x) & (x >= 0) & (np.floor(x) == x)

    def _log_h(self, x):
        return -gammaln(x + 1.0)

    def _violations(self, tau):
        return {"tau1+1>0": ~(tau[..., 0] + 1 > 0), "tau2>0": ~(tau[..., 1] > 0)}

    def _log_partition(self, tau):
        a, b = tau[..., 0] + 1.0, tau[..., 1]
        return gammaln(a) - a * np.log(b)

    def _expected_eta(self, tau):
        a, b = tau[..., 0] + 1.0, tau[..., 1]
        return np.stack([digamma(a) - np.log(b), -a / b], axis=-1)

    def eta(self, phi):
        lam = self.check_phi(phi)["rate"]
        return np.array([math.log(lam), -lam])

    def check_phi(self, phi):
        lam = float(phi["rate"])
        if not lam > 0 or not math.isfinite(lam):
            raise DomainError(f"poisson: rate={lam!r} must be positive")
        return {"rate": lam}

    def sample(self, phi, rng, size=None):
        lam = self.check_phi(phi)["rate"]
        return rng.poisson(lam, size).astype(float)

    def posterior_mean(self, tau):
        tau = self.check_tau(tau)
        return {"rate": float((tau[..., 0] + 1.0) / tau[..., 1])}


class Exponential(ExponentialFamily):
    """eta(lam) = (-lam, log lam); conjugate Gamma(shape tau2 + 1, rate tau1)."""

    name = "exponential"
    dim = 2
    default_tau0 = (0.1, 0.0)
    param_names = ("rate",)

    def in_support(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            return np.isfinite(x) & (x >= 0)

    def _violations(self, tau):
        return {"tau2+1>0": ~(tau[..., 1] + 1 > 0), "tau1>0": ~(tau[..., 0] > 0)}

    def _log_partition(self, tau):
        a, b = tau[..., 1] + 1.0, tau[..., 0]
        return gammaln(a) - a * np.log(b)

    def _expected_eta(self, tau):
        a, b = tau[..., 1] + 1.0, tau[..., 0]
        return np.stack([-a / b, digamma(a) - np.log(b)], axis=-1)

    def eta(self, phi):
        lam = self.check_phi(phi)["rate"]
        return np.array([-lam, math.log(lam)])

    def check_phi(self, phi):
        lam = float(phi["rate"])
        if not lam > 0 or not math.isfinite(lam):
            raise DomainError(f"exponential: rate={lam!r} must be positive")
        return {"rate": lam}

    def sample(self, phi, rng, size=None):
        lam = self.check_phi(phi)["rate"]
        return rng.exponential(1.0 / lam, size)

    def posterior_mean(self, tau):
        tau = self.check_tau(tau)
        return {"rate": float((tau[..., 1] + 1.0) / tau[..., 0])}


class Normal(ExponentialFamily):
    """Normal with unknown mean m and precision t.

    eta(m, t) = (t m, -t/2, -(t m^2 + log(2 pi / t)) / 2) against T = (x, x^2, 1),
    so h = 1. The conjugate is Normal-Gamma over (m, t) with base measure
    dm dt: shape a = (tau3 + 1)/2, rate b = (tau2 - tau1^2/tau3)/2,
    m | t ~ N(tau1/tau3, 1/(tau3 t)).
    """

    name = "normal"
    dim = 3
    default_tau0 = (0.0, 1.0, 1.0)
    param_names = ("mean", "variance")

    def in_support(self, x):
        return np.isfinite(np.asarray(x, dtype=float))

    def _suff_stat(self, x):
        return np.stack([x, x * x, np.ones_like(x)], axis=-1)

    def _violations(self, tau):
        t3 = tau[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            spread = tau[..., 1] - tau[..., 0] ** 2 / t3
        return {"tau3>0": ~(t3 > 0), "tau2-tau1^2/tau3>0": ~(spread > 0)}

    @staticmethod
    def _ab(tau):
        t1, t2, t3 = tau[..., 0], tau[..., 1], tau[..., 2]
        return (t3 + 1.0) / 2.0, (t2 - t1 * t1 / t3) / 2.0

    def _log_partition(self, tau):
        t3 = tau[..., 2]
        a, b = self._ab(tau)
        return 0.5 * (1.0 - t3) * LOG_2PI - 0.5 * np.log(t3) + gammaln(a) - a * np.log(b)

    def _expected_eta(self, tau):
        t1, t3 = tau[..., 0], tau[..., 2]
        a, b = self._ab(tau)
        mean_t = a / b
        m = t1 / t3
        # E[t m], E[-t/2], E[-(t m^2 + log 2pi - log t)/2]
        return np.stack(
            [
                mean_t * m,
                -0.5 * mean_t,
                -0.5 * (mean_t * m * m + 1.0 / t3 + LOG_2PI - digamma(a) + np.log(b)),
            ],
            axis=-1,
        )

    def eta(self, phi):
        phi = self.check_phi(phi)
        m, t = phi["mean"], 1.0 / phi["variance"]
        return np.array([t * m, -t / 2, -(t * m * m + math.log(2 * math.pi / t)) / 2])

    def check_phi(self, phi):
        m, v = float(phi["mean"]), float(phi["variance"])
        if not math.isfinite(m) or not (v > 0 and math.isfinite(v)):
            raise DomainError(f"normal: mean={m!r}, variance={v!r} invalid")
        return {"mean": m, "variance": v}

    def sample(self, phi, rng, size=None):
        phi = self.check_phi(phi)
        return rng.normal(phi["mean"], math.sqrt(phi["variance"]), size)

    def posterior_mean(self, tau):
        tau = self.check_tau(tau)
        a, b = self._ab(tau)
        # E[1/t] under Gamma(a, b) is b/(a-1), finite only for a > 1
        variance = float(b / (a - 1.0)) if a > 1.0 else float("nan")
        return {"mean": float(tau[..., 0] / tau[..., 2]), "variance": variance}


_FAMILIES = {cls.name: cls() for cls in (Bernoulli, Poisson, Exponential, Normal)}


def get_family(family) -> ExponentialFamily:
    """Return the family instance for a canonical name (or pass one through)."""
    if isinstance(family, ExponentialFamily):
        return family
    try:
        return _FAMILIES[str(family).lower()]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILY_NAMES)}") from None
