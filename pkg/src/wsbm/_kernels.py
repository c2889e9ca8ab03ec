"""Compiled inner loops."""
import numpy as np
from numba import njit


@njit(cache=True)
def gauss_seidel_sweeps(T, mu, E, log_mu0, tol, max_sweeps):
    """In-place sequential mu updates until max-abs change < tol.

    T: (d, n, n) statistics with zero diagonal; mu: (n, k);
    E: (k, k, d) expected natural parameters per block pair.
    Returns (sweeps done, converged).
    """
    d, n, _ = T.shape
    k = mu.shape[1]
    M = np.empty((d, k))
    s = np.empty(k)
    new = np.empty(k)
    for sweep in range(1, max_sweeps + 1):
        delta = 0.0
        for i in range(n):
            for c in range(d):
                for z in range(k):
                    M[c, z] = 0.0
                for j in range(n):
                    t = T[c, i, j]
                    if t != 0.0:
                        for z in range(k):
                            M[c, z] += t * mu[j, z]
            smax = -np.inf
            for z in range(k):
                acc = log_mu0[z]
                for zp in range(k):
                    for c in range(d):
                        acc += E[z, zp, c] * M[c, zp]
                s[z] = acc
                if acc > smax:
                    smax = acc
            total = 0.0
            for z in range(k):
                new[z] = np.exp(s[z] - smax)
                total += new[z]
            for z in range(k):
                v = new[z] / total
                diff = abs(v - mu[i, z])
                if diff > delta:
                    delta = diff
                mu[i, z] = v
        if delta < tol:
            return sweep, True
    return max_sweeps, False
