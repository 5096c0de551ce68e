"""Boundary description of a cardioid through a boundary point, and its residual."""

import argparse

import numpy as np

from quaddec.qdomain import QuadratureDomain, boundary_description


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=0.4)
    ap.add_argument("--theta", type=float, default=0.0, help="boundary point P(exp(i theta))")
    args = ap.parse_args()

    for name, Q in (("disc", QuadratureDomain.disc()), (f"cardioid c={args.c}", QuadratureDomain.cardioid(args.c))):
        a = complex(Q.map(np.exp(1j * args.theta)))
        bd = boundary_description(Q, a)
        print(f"== {name}, a = {a:.6g}")
        print(bd.equation)
        print(f"A = {bd.A:.12g}, c = {bd.c:.12g}, residual on 256 samples = {bd.residual:.2e}")
        if bd.cleared is not None:
            print("cleared polynomial coefficients (rows z^i, columns zbar^j):")
            print(np.array2string(bd.cleared, precision=12, suppress_small=True))


if __name__ == "__main__":
    main()
