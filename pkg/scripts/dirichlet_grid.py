"""Harmonic extension of rational boundary data on a cardioid, written as a CSV grid.

Columns: x, y, u from the kernel decomposition, u from a Fourier-Poisson
reference, and their difference.
"""

import argparse
import csv
import sys

import numpy as np

from quaddec import decomp
from quaddec.circle import BivariateRational
from quaddec.qdomain import QuadratureDomain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=0.25)
    ap.add_argument("--n", type=int, default=12, help="radial and angular grid size")
    ap.add_argument("--output", default="-")
    args = ap.parse_args()
    Q = QuadratureDomain.cardioid(args.c)
    # Re(1 / (3 - z)) + |z|^2
    R = BivariateRational(
        np.array([[6, -1], [-1, 0]], dtype=complex), np.array([[9, -3], [-3, 1]], dtype=complex)
    ) + BivariateRational(np.array([[0, 0], [0, 1]], dtype=complex))
    u = decomp.dirichlet_solve(Q, R)
    ref = decomp.poisson_reference(Q, R)
    r = (np.arange(args.n) + 0.5) / args.n
    w = (r[:, None] * np.exp(2j * np.pi * np.arange(args.n) / args.n)[None, :]).ravel()
    z = Q.map(w)
    a, b = u.eval_w(w), ref.eval_w(w)
    fh = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["x", "y", "u", "u_reference", "difference"])
    for zi, ai, bi in zip(z, a, b):
        writer.writerow([f"{zi.real:.17g}", f"{zi.imag:.17g}", f"{ai.real:.17g}", f"{bi.real:.17g}", f"{abs(ai - bi):.3e}"])
    if fh is not sys.stdout:
        fh.close()
    print(f"max |u - reference| = {np.max(np.abs(a - b)):.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
