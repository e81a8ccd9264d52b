#!/usr/bin/env python3
"""Study how fast q * bandwidth approaches its limit.

Prints the deviation from the closed-form constant for each q together with
the effective convergence power alpha (fitting deviation ~ c * q^-alpha over
consecutive triples).  The deviation shrinks far slower than any power of
1/q -- empirically like (log q)^(-3/2) -- which is why the extrapolator
switches to a logarithmic basis for this observable.

Example:
    python scripts/bandwidth_convergence.py --q 25,51,101,201,401
"""

import argparse

from mpmath import mp, mpf, workprec

from hofmom import (RationalFlux, bandwidth, edge_spectrum, extrapolate,
                    thouless_constant)
from hofmom.moments import _effective_power


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--q", default="25,51,101,201,401")
    ap.add_argument("--precision", type=int, default=192)
    args = ap.parse_args()
    q_list = tuple(int(t) for t in args.q.split(","))

    with workprec(args.precision):
        ref = thouless_constant(precision=args.precision)
        values = []
        print(f"{'q':>6} {'q*bandwidth':>16} {'deviation':>12} "
              f"{'log-fit c':>10}")
        for q in q_list:
            spec = edge_spectrum(RationalFlux(1, q), precision=args.precision)
            v = q * bandwidth(spec)
            values.append(v)
            dev = (v - ref) / ref
            c = float((v - ref) * mp.log(q) ** mpf("1.5"))
            print(f"{q:>6} {mp.nstr(v, 12):>16} {float(dev):>12.3e} "
                  f"{c:>10.4f}")
        if len(values) >= 3:
            alpha = _effective_power(q_list, values)
            est = extrapolate(q_list, values, n=1, kind="bandwidth")
            print(f"\neffective 1/q power of the tail: "
                  f"{alpha if alpha is not None else 'non-monotone'}")
            print(f"extrapolated ({est.model} basis): "
                  f"{mp.nstr(est.extrapolated, 12)}  "
                  f"(closed form {mp.nstr(ref, 12)}, relative deviation "
                  f"{float((est.extrapolated - ref) / ref):.2e})")


if __name__ == "__main__":
    main()
