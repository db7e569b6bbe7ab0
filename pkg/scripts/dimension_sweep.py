"""Sweep finite-k dimension estimates against the closed-form predictions.

Example:
    python3 scripts/dimension_sweep.py -b 3 -m 2 --k-max 2000
"""

import argparse

from holeshift import (
    estimate_dims,
    gen_lpq,
    gen_mixed,
    gen_progressive,
    gen_totally_distinct,
    make_params,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-b", type=int, default=3)
    ap.add_argument("-m", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=2000)
    ap.add_argument("--seed", default="0", help="cycled seed digits")
    args = ap.parse_args()

    p = make_params(args.b, args.m)
    seed = tuple(int(c) for c in args.seed)
    rows = [
        ("po", gen_progressive(p, seed)),
        ("td", gen_totally_distinct(p, seed)),
        ("lpq(1,1)", gen_lpq(p, 1, 1, seed)),
        ("lpq(2,1)", gen_lpq(p, 2, 1, seed)),
    ]
    if p.m >= 3:
        rows.append(("mixed", gen_mixed(p, seed)))

    print(f"b={p.b} m={p.m} k_max={args.k_max}")
    print(f"{'schedule':<10} {'liminf':>10} {'limsup':>10} {'predicted':>10} {'gap':>9}")
    for name, s in rows:
        rep = estimate_dims(s, args.k_max)
        pred = rep.prediction.hausdorff if rep.prediction else float("nan")
        gap = abs(rep.liminf_est - pred)
        print(
            f"{name:<10} {rep.liminf_est:>10.6f} {rep.limsup_est:>10.6f}"
            f" {pred:>10.6f} {gap:>9.2e}"
        )


if __name__ == "__main__":
    main()
