"""Choosing the number of blocks by approximate Bayes factors (ELBO differences)."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .families import get_family
from .vb import FitConfig, FitResult, fit, with_k

__all__ = ["SelectionEntry", "SelectionReport", "log_bayes_factor", "select_k"]


def log_bayes_factor(fit1: FitResult, fit2: FitResult) -> float:
    """log B(M1, M2) approximated by G1 - G2."""
    fp1, fp2 = fit1.graph_fingerprint, fit2.graph_fingerprint
    if fp1 is not None and fp2 is not None and fp1 != fp2:
        raise ValueError("fits were computed on different graphs")
    if fit1.n != fit2.n:
        raise ValueError(f"fits cover different vertex counts ({fit1.n} vs {fit2.n})")
    if fit1.family != fit2.family:
        raise ValueError(f"fits use different families ({fit1.family} vs {fit2.family})")
    return fit1.elbo - fit2.elbo


@dataclass
class SelectionEntry:
    k: int
    elbo: float
    result: FitResult


@dataclass
class SelectionReport:
    entries: list[SelectionEntry]
    chosen_k: int

    @property
    def chosen(self) -> FitResult:
        return next(e.result for e in self.entries if e.k == self.chosen_k)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "elbo", "chosen"])
        for e in self.entries:
            writer.writerow([e.k, repr(float(e.elbo)), int(e.k == self.chosen_k)])
        return buf.getvalue()


def select_k(A, family, k_range, config: FitConfig | None = None) -> SelectionReport:
    """Fit every k in ``k_range``; choose the largest best-over-restarts G (smallest k on ties)."""
    ks = sorted(set(int(k) for k in k_range))
    if not ks or ks[0] < 1:
        raise ValueError("k_range must be non-empty with every k >= 1")
    base = config if config is not None else FitConfig(k=ks[0], family=family)
    if base.family != get_family(family):
        raise ValueError("config family does not match the requested family")
    entries = []
    for k in ks:
        res = fit(A, with_k(base, k))
        entries.append(SelectionEntry(k, res.elbo, res))
    best = entries[0]
    for e in entries[1:]:
        if e.elbo > best.elbo:
            best = e
    return SelectionReport(entries, best.k)
