"""Tabulate focal radii over a grid of Jacobi eigenvalue pairs.

For each (lambdaR, lambdaA) pair, prints the focal radii found in the window
together with the Jacobi amplitude residual at each radius, covering the
trigonometric, hyperbolic and flat branches.
"""

import argparse

from focalis import focal
from focalis.focal import Window


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda-r", type=float, nargs="+",
                    default=[-4.0, -1.0, 0.0, 1.0, 4.0])
    ap.add_argument("--lambda-a", type=float, nargs="+",
                    default=[-3.0, 0.0, 0.5, 3.0])
    ap.add_argument("--window", type=float, nargs=2, default=[1e-3, 10.0])
    args = ap.parse_args()

    window = Window(*args.window)
    print(f"{'lambdaR':>8} {'lambdaA':>8}  radii (|Y| residual)")
    for lr in args.lambda_r:
        for la in args.lambda_a:
            radii = focal.focal_radii_pair(lr, la, window)
            if not radii:
                print(f"{lr:8.2f} {la:8.2f}  none")
                continue
            parts = [f"{r:.6f} ({abs(focal.jacobi_amplitude(lr, la, r)):.1e})"
                     for r in radii]
            print(f"{lr:8.2f} {la:8.2f}  " + ", ".join(parts))


if __name__ == "__main__":
    main()
