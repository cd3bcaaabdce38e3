#!/usr/bin/env python3
"""Render the canonical lamination of every portrait of one degree.

Builds each canonical pullback to the requested depth and writes one SVG
per portrait, plus the lamination documents next to them.  Geodesic style
by default since the deep stages read much better as arcs.
"""
import argparse
import sys
from pathlib import Path

from lamlab import (
    RenderSpec,
    canonical_lamination,
    document_from_state,
    enumerate_fpps,
    fpps_up_to_rotation,
    write_document,
    write_svg,
)


def block_tag(P) -> str:
    if not P.blocks:
        return "trivial"
    return "_".join("".join(str(i) for i in b) for b in P.blocks)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=5)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--out-dir", default="gallery")
    ap.add_argument("--size", type=int, default=700)
    ap.add_argument(
        "--style", choices=("straight", "geodesic"), default="geodesic"
    )
    ap.add_argument(
        "--all", action="store_true",
        help="every portrait, not just one per rotation class",
    )
    args = ap.parse_args(argv)
    if args.degree < 2:
        ap.error("--degree must be at least 2")
    if args.depth < 0:
        ap.error("--depth must be >= 0")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = RenderSpec(size=args.size, style=args.style)
    portraits = (
        enumerate_fpps(args.degree) if args.all else fpps_up_to_rotation(args.degree)
    )
    for P in portraits:
        state = canonical_lamination(P, args.depth)
        tag = f"d{args.degree}_{block_tag(P)}"
        doc = document_from_state(
            state, f"render_gallery --degree {args.degree} --depth {args.depth}"
        )
        (out / f"{tag}.json").write_text(write_document(doc))
        (out / f"{tag}.svg").write_text(write_svg(doc, spec))
        print(f"{tag}: {len(doc.leaves)} leaves")
    print(f"{len(portraits)} renderings in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
