"""Track a run-length family's stage exponents at its natural checkpoints.

The inf-side checkpoints sit at cycle ends (TD-heavy history), the sup-side
ones a fresh PO run later; each side converges to its own interpolated
endpoint, splitting the lower and upper dimensions.

Example:
    python3 scripts/family_checkpoints.py --s 1/4 --t 1/2 --k-max 1000000
"""

import argparse
from fractions import Fraction

from holeshift import (
    build_pq_schedule,
    estimate_dims,
    family_checkpoints,
    gen_family,
    make_params,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-b", type=int, default=3)
    ap.add_argument("-m", type=int, default=2)
    ap.add_argument("--s", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--t", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--p1", type=int, default=1)
    ap.add_argument("--k-max", type=int, default=10**6)
    ap.add_argument("--seed", default="0", help="cycled seed digits")
    args = ap.parse_args()

    p = make_params(args.b, args.m)
    pq = build_pq_schedule(p.m, args.s, args.t, p1=args.p1)
    fam = gen_family(p, pq, tuple(int(c) for c in args.seed))
    cps = family_checkpoints(fam, args.k_max)
    k_top = max(k for _, k in cps["sup"] + cps["inf"])
    rep = estimate_dims(fam, k_top)
    pred = rep.prediction

    print(
        f"b={p.b} m={p.m} s={args.s} t={args.t}  "
        f"hausdorff={pred.hausdorff:.9f} packing={pred.packing:.9f}"
    )
    for side, target in [("sup", pred.packing), ("inf", pred.hausdorff)]:
        print(f"{side} side:")
        print(f"{'n':>4} {'k':>9} {'r_k':>12} {'error':>10}")
        for n, k in cps[side]:
            r = float(rep.series[k])
            print(f"{n:>4} {k:>9} {r:>12.8f} {abs(r - target):>10.2e}")


if __name__ == "__main__":
    main()
