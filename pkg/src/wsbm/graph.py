"""Dense weighted graphs, block/bundle indexing and file I/O."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .families import ExponentialFamily, get_family

__all__ = [
    "GraphFormatError",
    "WeightedGraph",
    "n_bundles",
    "bundle_index",
    "bundle_pairs",
    "bundle_lookup",
    "load_graph",
    "save_dense",
    "parse_dense",
    "parse_edge_list",
    "load_labels",
    "save_labels",
]


class GraphFormatError(ValueError):
    """Malformed, asymmetric or non-finite graph input."""


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric n x n weights; the diagonal is ignored by every consumer."""

    weights: np.ndarray
    family_hint: str | None = None
    _fingerprint: str = field(default="", init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphFormatError(f"weight matrix must be square, got shape {w.shape}")
        n = w.shape[0]
        off = ~np.eye(n, dtype=bool)
        if not np.all(np.isfinite(w[off])):
            raise GraphFormatError("weights contain NaN or Inf")
        if not np.array_equal(w[off], w.T[off]):
            i, j = np.argwhere((w != w.T) & off)[0]
            raise GraphFormatError(f"asymmetric weights at ({i + 1}, {j + 1}): {w[i, j]!r} != {w[j, i]!r}")
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.family_hint is not None:
            fam = get_family(self.family_hint)
            object.__setattr__(self, "family_hint", fam.name)
            self.validate(fam)
        object.__setattr__(self, "_fingerprint", hashlib.sha256(w.tobytes()).hexdigest())

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def fingerprint(self) -> str:
        return self._fingerprint

    def upper(self) -> np.ndarray:
        """Weights over unordered pairs i < j, row-major."""
        return self.weights[np.triu_indices(self.n, 1)]

    def validate(self, family) -> None:
        """Raise SupportError unless every off-diagonal weight is in support."""
        get_family(family).check_support(self.upper())

    def suff_stats(self, family: ExponentialFamily) -> np.ndarray:
        """n x n x d array of T(A_ij) with zeroed diagonal."""
        fam = get_family(family)
        self.validate(fam)
        T = fam._suff_stat(self.weights.copy())
        idx = np.arange(self.n)
        T[idx, idx, :] = 0.0
        return T

    def log_h_total(self, family) -> float:
        fam = get_family(family)
        return float(np.sum(fam.log_h(self.upper())))


# -- bundles -----------------------------------------------------------------

def n_bundles(k: int) -> int:
    return k * (k + 1) // 2


def bundle_index(a: int, b: int, k: int) -> int:
    """1-based id of the unordered block pair {a, b} (1-based labels)."""
    if k < 1 or not (1 <= a <= k and 1 <= b <= k):
        raise ValueError(f"block labels ({a}, {b}) out of range for k={k}")
    u, v = min(a, b), max(a, b)
    return (u - 1) * k - (u - 1) * (u - 2) // 2 + (v - u + 1)


def bundle_pairs(k: int) -> list[tuple[int, int]]:
    """Block pairs (a, b), a <= b, 1-based, in bundle-id order."""
    return [(a, b) for a in range(1, k + 1) for b in range(a, k + 1)]


def bundle_lookup(k: int) -> np.ndarray:
    """k x k array of 0-based bundle ids for 0-based block labels."""
    out = np.empty((k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            out[a, b] = bundle_index(a + 1, b + 1, k) - 1
    return out


# -- file formats ------------------------------------------------------------

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _parse_float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: cannot parse {tok!r} as a number") from None


def parse_dense(text: str) -> np.ndarray:
    rows = [[_parse_float(t, ln) for t in line.split()] for ln, line in _data_lines(text)]
    n = len(rows)
    if n == 0:
        raise GraphFormatError("empty matrix")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise GraphFormatError(f"row {i + 1} has {len(r)} values, expected {n}")
    return np.array(rows, dtype=float)


def parse_edge_list(text: str, fill: float | None = None) -> np.ndarray:
    lines = list(_data_lines(text))
    if not lines:
        raise GraphFormatError("empty edge list")
    ln, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise GraphFormatError(f"line {ln}: expected header 'n <N>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise GraphFormatError(f"line {ln}: bad vertex count {parts[1]!r}") from None
    if n < 1:
        raise GraphFormatError(f"line {ln}: vertex count must be positive")
    w = np.full((n, n), np.nan)
    for ln, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {ln}: expected 'i j w'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {ln}: vertex ids must be integers") from None
        x = _parse_float(parts[2], ln)
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"line {ln}: vertex id out of range 1..{n}")
        if i == j:
            continue
        if not np.isfinite(x):
            raise GraphFormatError(f"line {ln}: non-finite weight")
        prev = w[i - 1, j - 1]
        if not np.isnan(prev) and prev != x:
            raise GraphFormatError(f"line {ln}: conflicting weights for pair ({i}, {j}): {prev!r} vs {x!r}")
        w[i - 1, j - 1] = w[j - 1, i - 1] = x
    np.fill_diagonal(w, 0.0)
    missing = np.isnan(w)
    if missing.any():
        if fill is None:
            i, j = np.argwhere(missing)[0]
            raise GraphFormatError(
                f"pair ({i + 1}, {j + 1}) has no weight; dense fitting needs every pair (supply a fill value)"
            )
        w[missing] = fill
    return w


def load_graph(path, format: str = "dense-matrix", family=None, fill: float | None = None) -> WeightedGraph:
    """Read a graph file. ``format`` is ``dense-matrix`` or ``edge-list``."""
    text = Path(path).read_text(encoding="utf-8")
    if format == "dense-matrix":
        w = parse_dense(text)
    elif format == "edge-list":
        w = parse_edge_list(text, fill=fill)
    else:
        raise ValueError(f"unknown graph format {format!r}")
    return WeightedGraph(w, family_hint=None if family is None else get_family(family).name)


def save_dense(path, graph: WeightedGraph) -> None:
    lines = [" ".join(format(float(x), ".17g") for x in row) for row in graph.weights]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_labels(path) -> np.ndarray:
    """1-based labels, one per line."""
    labels = []
    for ln, line in _data_lines(Path(path).read_text(encoding="utf-8")):
        try:
            v = int(line)
        except ValueError:
            raise GraphFormatError(f"line {ln}: label {line!r} is not an integer") from None
        if v < 1:
            raise GraphFormatError(f"line {ln}: labels are 1-based")
        labels.append(v)
    return np.array(labels, dtype=np.int64)


def save_labels(path, labels) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in labels), encoding="utf-8")
