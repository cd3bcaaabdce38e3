#!/usr/bin/env python3
"""Census of fixed point portraits across degrees.

For each degree: portrait count, rotation classes, and the distribution
of sector degrees.  Counts follow the Catalan numbers; the sector-degree
sum spends exactly d-1 criticality per portrait, which is re-checked here
on every row.
"""
import argparse
import json
import sys
from collections import Counter

from lamlab import enumerate_fpps, fixed_sectors, fpps_up_to_rotation


def census_row(d: int) -> dict:
    portraits = enumerate_fpps(d)
    classes = fpps_up_to_rotation(d)
    sector_sizes = Counter()
    for P in portraits:
        sectors = fixed_sectors(P)
        spent = sum(S.sector_degree - 1 for S in sectors)
        if spent != d - 1:
            raise AssertionError(f"criticality budget broken for {P}")
        sector_sizes.update(S.sector_degree for S in sectors)
    return {
        "degree": d,
        "portraits": len(portraits),
        "rotation_classes": len(classes),
        "sector_degree_histogram": dict(sorted(sector_sizes.items())),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--json", metavar="PATH", help="write the full table here")
    args = ap.parse_args(argv)
    if args.max_degree < 2:
        ap.error("--max-degree must be at least 2")

    rows = []
    print(f"{'d':>3} {'portraits':>10} {'classes':>8}  sector degrees")
    for d in range(2, args.max_degree + 1):
        row = census_row(d)
        rows.append(row)
        hist = ", ".join(f"{k}:{v}" for k, v in row["sector_degree_histogram"].items())
        print(f"{d:>3} {row['portraits']:>10} {row['rotation_classes']:>8}  {hist}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        print(f"table written to {args.json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
