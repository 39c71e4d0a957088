#!/usr/bin/env python3
"""Write a ring sample to CSV for use with the `hsictest test` subcommand."""

import argparse

from hsictest import GeneratorKind, GeneratorSpec, sample


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", help="output CSV path")
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--radius", type=float, default=1.0)
    ap.add_argument("--noise", type=float, default=0.0)
    args = ap.parse_args()
    spec = GeneratorSpec(
        GeneratorKind.RING_UNIFORM,
        seed=args.seed,
        radius=args.radius,
        noise=args.noise,
    )
    data = sample(spec, args.n)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("x,y\n")
        for xr, yr in zip(data.x_points, data.y_points):
            fh.write(f"{float(xr[0])!r},{float(yr[0])!r}\n")
    print(f"wrote {args.n} rows to {args.out}")


if __name__ == "__main__":
    main()
