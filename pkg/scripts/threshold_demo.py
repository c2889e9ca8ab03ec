"""Two-block demo: what a single threshold keeps of a weighted graph.

For the low- and high-variance versions of the two-block Normal graph
(within-block mean 35, between-block mean 65) this prints the probability of
exceeding a threshold of 50 under each bundle distribution, then compares the
recovered partitions of the Normal WSBM and of the Bernoulli SBM fitted to the
graph thresholded at its median weight.

    python scripts/threshold_demo.py --datasets 10
"""
import argparse

import numpy as np

from wsbm.baselines import ThresholdPlan, exceedance_prob, fit_thresholded_sbm
from wsbm.metrics import vi
from wsbm.synth import generate, two_block_demo
from wsbm.vb import FitConfig, fit


def main():
    parser = argparse.ArgumentParser(description="thresholding vs. weighted inference on the two-block demo")
    parser.add_argument("--n", type=int, default=160)
    parser.add_argument("--datasets", type=int, default=10)
    parser.add_argument("--variances", type=float, nargs="+", default=[25.0, 2500.0])
    args = parser.parse_args()

    for variance in args.variances:
        p_in, p_out = exceedance_prob(35, variance, 50), exceedance_prob(65, variance, 50)
        print(f"variance {variance:g}: P(w > 50) within {p_in:.4f}, between {p_out:.4f}")
        w_vi, t_vi = [], []
        for seed in range(args.datasets):
            A, z = generate(two_block_demo(args.n, variance, seed=seed))
            w_vi.append(vi(z, fit(A, FitConfig(k=2, family="normal", seed=seed)).z))
            (tf,) = fit_thresholded_sbm(A, ThresholdPlan((0.5,)), 2, FitConfig(k=2, family="bernoulli", seed=seed))
            t_vi.append(vi(z, tf.result.z))
        print(f"  mean VI over {args.datasets} datasets: WSBM {np.mean(w_vi):.4f}, thresholded SBM {np.mean(t_vi):.4f}")


if __name__ == "__main__":
    main()
