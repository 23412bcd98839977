"""Holonomy factorization statistics over random connection paths.

Samples random su(2)-valued connection coefficients, computes the holonomy
element against a random reference, and compares it with the transport of
the pulled-back coefficient.  Reports the residual distribution.
"""

import argparse

import numpy as np

from focalis import transport
from focalis.algebras import load_algebra


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--samples", type=int, default=21)
    ap.add_argument("--steps", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    alg = load_algebra("su2")
    rng = np.random.default_rng(args.seed)

    def rand_path():
        mats = []
        for _ in range(args.samples):
            x = alg.from_coefficients(rng.normal(size=3))
            nrm = np.linalg.norm(x)
            mats.append(x if nrm <= 1.0 else x / nrm)
        return transport.ConnectionPath(np.stack(mats))

    residuals = []
    for _ in range(args.trials):
        omega, omega0 = rand_path(), rand_path()
        hol = transport.holonomy_element(omega, omega0, steps=args.steps)
        mu = transport.pullback_connection(omega, omega0, steps=args.steps)
        phi = transport.transport(mu, steps=args.steps)
        residuals.append(float(np.max(np.abs(hol - phi))))

    residuals = np.array(residuals)
    print(f"trials: {args.trials}, integration steps: {args.steps}")
    print(f"max residual:    {residuals.max():.3e}")
    print(f"median residual: {np.median(residuals):.3e}")


if __name__ == "__main__":
    main()
