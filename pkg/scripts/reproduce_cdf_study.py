#!/usr/bin/env python3
"""Empirical null CDF of the gradient statistic against its approximations.

Defaults reproduce the Birnbaum-Saunders study at n = 10 with 100000
replicates: the order-1/n expanded CDF should track the empirical CDF
visibly better than the first-order chi-square.  The grid and all four
curves go to a CSV for plotting.
"""

import argparse

from gradcorr.simulate import run_cdf_study, write_cdf_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="birnbaum-saunders")
    ap.add_argument("--theta", default="1,1", help="true parameter values")
    ap.add_argument("--theta10", default="1", help="null value of phi")
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--reps", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=20260814)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--out", default="cdf_study.csv")
    args = ap.parse_args()

    study = run_cdf_study(
        args.model,
        tuple(float(v) for v in args.theta.split(",")),
        tuple(float(v) for v in args.theta10.split(",")),
        n=args.n, replicates=args.reps, seed=args.seed,
        grid_points=args.grid)
    write_cdf_csv(study, args.out)

    print(f"# {args.model}, n = {args.n}, {args.reps} replicates "
          f"({study.failures} non-convergent)")
    print(f"sup |F_emp - G_q|       = {study.sup_chisq:.5f}")
    print(f"sup |F_emp - expanded|  = {study.sup_expanded:.5f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
