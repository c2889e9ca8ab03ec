"""Run the three VI sweeps on the 5-block Normal testbed and write one CSV per sweep.

    python scripts/run_benchmark.py --datasets 30 --outdir results
"""
import argparse
import sys
import time
from pathlib import Path

from wsbm.benchmark import SWEEPS, BenchmarkConfig, rows_to_csv, run_benchmark


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--datasets", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--restarts", type=int, default=10)
    parser.add_argument("--sweeps", nargs="+", default=sorted(SWEEPS), choices=sorted(SWEEPS))
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for sweep in args.sweeps:
        cfg = BenchmarkConfig(sweep=sweep, datasets=args.datasets, seed0=args.seed, restarts=args.restarts)
        start = time.perf_counter()
        rows = run_benchmark(cfg, lambda v, d: print(f"  {sweep}={v} dataset {d + 1}/{cfg.datasets}", file=sys.stderr))
        path = outdir / f"benchmark_{sweep}.csv"
        path.write_text(rows_to_csv(rows, cfg.header()))
        print(f"{sweep}: wrote {path} in {time.perf_counter() - start:.0f}s")
        for r in rows:
            print(f"  {r.value:>8g}  {r.method:<20} {r.mean_vi:.4f} +- {r.stderr_vi:.4f}")


if __name__ == "__main__":
    main()
