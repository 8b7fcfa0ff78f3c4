"""Vertex denominators of shifted kernel polyhedra versus kappa_dot.

For each fixture kernel W and many random integer shifts d, the vertices
of {x in W + d, x >= 0} are enumerated exactly and the lcm of their
coordinate denominators is recorded.  Every observed lcm divides
kappa_dot, and the constructed witness family attains it.

Usage: python3 scripts/fractionality_sweep.py [--trials 200] [--seed 0]
"""

import argparse

from circuitkit.generate import dumbbell_incidence
from circuitkit.graver import hk_check
from circuitkit.ratmat import RatMatrix
from circuitkit.subspace import Subspace

FIXTURES = (
    ("triangle-chain", RatMatrix.from_rows([[1, 1, 0], [0, 1, 1]], cols=3)),
    ("two-bar", RatMatrix.from_rows([[2, 1]], cols=2)),
    ("worked-2x4", RatMatrix.from_rows([[1, 3, 4, 3], [0, 13, 9, 10]], cols=4)),
    ("dumbbell", dumbbell_incidence()),
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'fixture':<14} {'kappa_dot':>9} {'feasible':>8} "
          f"{'random lcm':>10} {'witness lcm':>11}")
    for name, A in FIXTURES:
        W = Subspace.from_kernel_matrix(A)
        rep = hk_check(W, trials=args.trials, seed=args.seed)
        print(f"{name:<14} {rep.kappa_dot:>9} {rep.feasible_trials:>8} "
              f"{rep.random_lcm:>10} {rep.witness_lcm:>11}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
