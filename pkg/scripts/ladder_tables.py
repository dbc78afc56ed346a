#!/usr/bin/env python3
"""Print exact entropy-ladder tables for a family grid.

Examples::

    python3 scripts/ladder_tables.py dinf --k 1 2 4 8 --nmax 10
    python3 scripts/ladder_tables.py lamplighter --k 2 8 32 --limit --nmax 12
    python3 scripts/ladder_tables.py z_drift --k 2 4 --p 3/4 --format csv
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from walklab import parsing, walks

FAMILIES = ("dinf", "bs11", "z_drift", "lamplighter", "f2product")


def family_text(name: str, p: Fraction, k: int | None) -> str:
    index = "k=limit" if k is None else f"k={k}"
    if name == "z_drift":
        return f"{name}({index})"
    return f"{name}(p={p}, {index})"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("family", choices=FAMILIES)
    parser.add_argument("--k", type=int, nargs="+", default=[1, 2, 4],
                        help="family depths (default 1 2 4)")
    parser.add_argument("--limit", action="store_true",
                        help="include the limit measure")
    parser.add_argument("--p", type=Fraction, default=Fraction(3, 4))
    parser.add_argument("--nmax", type=int, default=8)
    parser.add_argument("--format", choices=("table", "csv"), default="table")
    args = parser.parse_args(argv)

    grid: list[int | None] = list(args.k)
    if args.limit:
        grid.append(None)

    if args.format == "csv":
        print("measure,n,H,ratio,diff")
    for k in grid:
        text = family_text(args.family, args.p, k)
        ladder = walks.entropy_ladder(parsing.family_measure(text), args.nmax,
                                      label=text)
        checks = walks.EntropyLadder.verify(ladder)
        bad = [c for c in checks if not c.ok]
        if args.format == "table":
            print(f"\n{text}   "
                  f"(invariants: {'ok' if not bad else f'{len(bad)} failing'})")
            print(f"{'n':>4} {'H':>12} {'H/n':>12} {'diff':>12}")
            for row in ladder.to_rows():
                ratio = f"{row['ratio']:.8f}" if row["n"] else "-"
                diff = (f"{row['diff']:.8f}"
                        if row["n"] < ladder.n_max else "-")
                print(f"{row['n']:>4} {row['H']:>12.8f} {ratio:>12} {diff:>12}")
        else:
            for row in ladder.to_rows():
                print(f"{text},{row['n']},{row['H']!r},{row['ratio']!r},"
                      f"{row['diff']!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
