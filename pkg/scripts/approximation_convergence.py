"""Boundary error of quadrature-domain approximations of a Mobius map as the degree grows."""

import argparse

from quaddec import approx
from quaddec.errors import UnivalenceError
from quaddec.qdomain import invariant_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, default=0.5, help="g(w) = w / (1 - q w)")
    ap.add_argument("--max-degree", type=int, default=12)
    args = ap.parse_args()
    g = approx.AnalyticMapInput.from_series(approx.mobius_series(120, args.q))
    print("kind,degree,sup_error,derivative_error,q^(N-1),invariants_failed")
    for kind, fn in (("area", approx.approximate_area_qd), ("arclength", approx.approximate_arclength_qd)):
        for n in range(1, args.max_degree + 1):
            try:
                rep = fn(g, n)
            except UnivalenceError as exc:
                print(f"{kind},{n},,,,not univalent: {exc.diagnostic.get('reason', '')}")
                continue
            failed = ";".join(invariant_suite(rep.domain)["failed"])
            print(f"{kind},{n},{rep.sup_error:.3e},{rep.derivative_error:.3e},{args.q ** (n - 1):.3e},{failed}")


if __name__ == "__main__":
    main()
