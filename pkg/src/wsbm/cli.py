"""Command-line front end.

Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 data or support
validation error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from .benchmark import SWEEPS, BenchmarkConfig, rows_to_csv, run_benchmark
from .families import FAMILY_NAMES, DomainError, SupportError
from .graph import GraphFormatError, load_graph, load_labels, save_dense, save_labels
from .io import save_fit
from .metrics import vi
from .selection import select_k
from .synth import load_spec, generate
from .vb import FitConfig, fit

EXIT_USAGE, EXIT_IO, EXIT_DATA = 2, 3, 4


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_graph(args):
    try:
        return load_graph(args.graph, format=args.format, family=args.family, fill=args.fill)
    except OSError as exc:
        raise CLIError(f"cannot read graph: {exc}", EXIT_IO) from None
    except (SupportError, GraphFormatError) as exc:
        raise CLIError(str(exc), EXIT_DATA) from None


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _fit_config(args, k: int) -> FitConfig:
    try:
        return FitConfig(
            k=k,
            family=args.family,
            seed=args.seed,
            restarts=args.restarts,
            max_outer=args.max_outer,
            max_inner=args.max_inner,
            inner_tol=args.inner_tol,
            outer_tol=args.outer_tol,
            refine_rounds=args.refine_rounds,
        )
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_USAGE) from None


def cmd_generate(args) -> int:
    try:
        spec = load_spec(args.config)
    except OSError as exc:
        raise CLIError(f"cannot read config: {exc}", EXIT_IO) from None
    except (ValueError, TypeError, KeyError) as exc:
        raise CLIError(f"bad generator config: {exc}", EXIT_USAGE) from None
    if args.seed is not None:
        spec.seed = args.seed
    graph, labels = generate(spec)
    out = Path(args.out)
    try:
        save_dense(out, graph)
        save_labels(out.with_suffix(".labels"), labels)
    except OSError as exc:
        raise CLIError(f"cannot write output: {exc}", EXIT_IO) from None
    print(f"wrote {out} and {out.with_suffix('.labels')} (n={graph.n}, k={spec.k})")
    return 0


def cmd_fit(args) -> int:
    graph = _read_graph(args)
    config = _fit_config(args, args.k)
    try:
        result = fit(graph, config)
    except DomainError as exc:
        raise CLIError(str(exc), EXIT_DATA) from None
    if args.out:
        try:
            save_fit(args.out, result)
        except OSError as exc:
            raise CLIError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    if args.labels_out:
        try:
            save_labels(args.labels_out, result.z)
        except OSError as exc:
            raise CLIError(f"cannot write {args.labels_out}: {exc}", EXIT_IO) from None
    print(f"elbo {result.elbo!r}")
    print(f"iterations {result.iterations}")
    return 0


def cmd_select(args) -> int:
    if args.kmin < 1 or args.kmax < args.kmin:
        raise CLIError("need 1 <= kmin <= kmax", EXIT_USAGE)
    graph = _read_graph(args)
    config = _fit_config(args, args.kmin)
    try:
        report = select_k(graph, args.family, range(args.kmin, args.kmax + 1), config)
    except DomainError as exc:
        raise CLIError(str(exc), EXIT_DATA) from None
    text = report.to_csv()
    if args.out:
        _write(args.out, text)
        print(f"chosen k {report.chosen_k}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    try:
        a, b = load_labels(args.labels_a), load_labels(args.labels_b)
    except OSError as exc:
        raise CLIError(f"cannot read labels: {exc}", EXIT_IO) from None
    except GraphFormatError as exc:
        raise CLIError(str(exc), EXIT_DATA) from None
    if a.shape != b.shape:
        raise CLIError(f"label files differ in length ({a.size} vs {b.size})", EXIT_USAGE)
    print(repr(vi(a, b)))
    return 0


def cmd_benchmark(args) -> int:
    grid = None
    if args.grid:
        try:
            grid = tuple(float(x) for x in args.grid.split(","))
        except ValueError:
            raise CLIError(f"bad grid {args.grid!r}", EXIT_USAGE) from None
        if args.sweep in ("k", "n"):
            grid = tuple(int(x) if x == int(x) else x for x in grid)
    try:
        cfg = BenchmarkConfig(sweep=args.sweep, datasets=args.datasets, seed0=args.seed, grid=grid,
                              restarts=args.restarts)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_USAGE) from None

    def progress(value, d):
        if args.verbose:
            print(f"{args.sweep}={value} dataset {d + 1}/{cfg.datasets}", file=sys.stderr)

    text = rows_to_csv(run_benchmark(cfg, progress), cfg.header())
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="graph file")
    p.add_argument("--format", choices=("dense-matrix", "edge-list"), default="dense-matrix",
                   help="graph file format (default: dense-matrix)")
    p.add_argument("--fill", type=float, default=None, help="weight for pairs missing from an edge list")
    p.add_argument("--family", choices=FAMILY_NAMES, required=True, help="edge-weight family")
    p.add_argument("--seed", type=int, default=0, help="seed of the first restart (default: 0)")
    p.add_argument("--restarts", type=int, default=10, help="random restarts per fit (default: 10)")
    p.add_argument("--max-outer", type=int, default=200, help="outer iteration cap (default: 200)")
    p.add_argument("--max-inner", type=int, default=50, help="mu sweep cap per outer iteration (default: 50)")
    p.add_argument("--inner-tol", type=float, default=1e-6, help="max-abs mu change tolerance (default: 1e-6)")
    p.add_argument("--outer-tol", type=float, default=1e-8, help="relative ELBO change tolerance (default: 1e-8)")
    p.add_argument("--refine-rounds", type=int, default=10,
                   help="split-refinement rounds after restarts, 0 disables (default: 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsbm", description="Weighted stochastic block models via variational Bayes.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a planted-partition graph from a JSON config",
                       description="Write a dense-matrix graph and a sidecar .labels file (1-based labels).")
    p.add_argument("config", help='generator JSON: a full spec, or {"preset": "testbed"|"two_block", "n":, "variance":, "seed":}')
    p.add_argument("--out", required=True, help="output matrix path; labels go to the same path with suffix .labels")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="fit a WSBM with k blocks", description="Fit by VB; prints G and the iteration count.")
    _add_graph_args(p)
    p.add_argument("--k", type=int, required=True, help="number of blocks")
    p.add_argument("--out", default=None, help="write the FitResult JSON here")
    p.add_argument("--labels-out", default=None, help="write hard labels (1-based, one per line) here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("select", help="choose k by approximate Bayes factors",
                       description="Fit every k in kmin..kmax; CSV columns k,elbo,chosen.")
    _add_graph_args(p)
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("compare", help="variation of information between two label files (nats)")
    p.add_argument("labels_a")
    p.add_argument("labels_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("benchmark", help="VI sweep on the 5-block Normal testbed",
                       description="CSV columns sweep,value,method,mean_vi,stderr_vi,datasets,seed0.")
    p.add_argument("--sweep", choices=sorted(SWEEPS), required=True)
    p.add_argument("--datasets", type=int, default=30, help="datasets per grid value (default: 30)")
    p.add_argument("--seed", type=int, default=0, help="first dataset seed (default: 0)")
    p.add_argument("--grid", default=None, help="comma-separated grid overriding the default")
    p.add_argument("--restarts", type=int, default=10, help="restarts per model fit (default: 10)")
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except CLIError as exc:
        print(f"wsbm {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
