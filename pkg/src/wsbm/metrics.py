"""Partition comparison: hard assignments and variation of information (nats)."""
from __future__ import annotations

import numpy as np

__all__ = ["hard_assignment", "contingency", "conditional_entropies", "vi"]


def hard_assignment(mu) -> np.ndarray:
    """Per-row argmax as 1-based labels; exact ties go to the lowest index."""
    mu = np.asarray(mu, dtype=float)
    return np.argmax(mu, axis=1).astype(np.int64) + 1


def contingency(P, Q) -> np.ndarray:
    """Co-occurrence counts between the blocks of P (rows) and Q (columns)."""
    P, Q = np.asarray(P), np.asarray(Q)
    if P.shape != Q.shape or P.ndim != 1:
        raise ValueError(f"label vectors differ in length: {P.shape} vs {Q.shape}")
    _, p = np.unique(P, return_inverse=True)
    _, q = np.unique(Q, return_inverse=True)
    counts = np.zeros((p.max(initial=-1) + 1, q.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (p, q), 1)
    return counts


def conditional_entropies(P, Q) -> tuple[float, float]:
    """(H(P|Q), H(Q|P)) in nats."""
    C = contingency(P, Q)
    n = C.sum()
    if n == 0:
        return 0.0, 0.0
    joint = C[C > 0] / n
    h_joint = -float(np.sum(joint * np.log(joint)))

    def entropy(margin):
        p = margin[margin > 0] / n
        return -float(np.sum(p * np.log(p)))

    h_p, h_q = entropy(C.sum(axis=1)), entropy(C.sum(axis=0))
    return max(h_joint - h_q, 0.0), max(h_joint - h_p, 0.0)


def vi(P, Q) -> float:
    """Variation of information H(P|Q) + H(Q|P)."""
    a, b = conditional_entropies(P, Q)
    return a + b
