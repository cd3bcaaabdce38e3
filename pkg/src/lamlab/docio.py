"""Reading, writing, and rendering lamination documents.

JSON on disk, SVG for pictures.  A document stores exact rationals only;
floating point shows up at render time and nowhere else.  Writing is
canonical: equal documents produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .circle import CirclePoint, parse_angle, render_dnary
from .fpp import FixedPointPortrait
from .leaves import Lamination, Leaf
from .pullback import CriticalPortrait, PullbackState

__all__ = [
    "LaminationDocument",
    "RenderSpec",
    "document_from_state",
    "format_angle",
    "read_document",
    "read_portrait",
    "write_document",
    "write_portrait",
    "write_svg",
]

TOOL_VERSION = __version__

_DOC_KEYS = {"degree", "leaves", "portrait", "fpp", "stages", "metadata"}


def format_angle(t: CirclePoint) -> str:
    """Serialize an angle as `p/q`, denominator always explicit."""
    v = t.value
    return f"{v.numerator}/{v.denominator}"


_fmt = format_angle


@dataclass(frozen=True)
class LaminationDocument:
    """A lamination with its construction data, ready for disk.

    Leaves are kept sorted by (smaller endpoint, larger endpoint), so two
    documents with the same content compare equal and serialize identically.
    `stages`, when present, runs parallel to `leaves` and records the first
    construction depth at which each leaf appeared.
    """

    degree: int
    leaves: tuple[Leaf, ...]
    portrait: CriticalPortrait | None = None
    fpp: FixedPointPortrait | None = None
    stages: tuple[int, ...] | None = None
    tool_version: str = TOOL_VERSION
    command: str = ""

    def __post_init__(self) -> None:
        ls = tuple(self.leaves)
        if len(set(ls)) != len(ls):
            raise ValueError("document contains a duplicate leaf")
        if self.stages is None:
            object.__setattr__(self, "leaves", tuple(sorted(ls)))
        else:
            st = tuple(int(s) for s in self.stages)
            if len(st) != len(ls):
                raise ValueError("stage annotations must cover the leaves exactly")
            if any(s < 0 for s in st):
                raise ValueError("stage annotations must be >= 0")
            order = sorted(zip(ls, st))
            object.__setattr__(self, "leaves", tuple(l for l, _ in order))
            object.__setattr__(self, "stages", tuple(s for _, s in order))
        if self.portrait is not None and self.portrait.degree != self.degree:
            raise ValueError("portrait degree disagrees with the document")
        if self.fpp is not None and self.fpp.degree != self.degree:
            raise ValueError("fixed point portrait degree disagrees with the document")

    def lamination(self) -> Lamination:
        depth = max(self.stages, default=0) if self.stages is not None else 0
        return Lamination(self.degree, frozenset(self.leaves), depth)

    def pullback_state(self) -> PullbackState:
        """Rebuild the staged construction recorded in this document.

        Requires a critical portrait.  Without stage annotations the whole
        leaf set is treated as a single stage.
        """
        if self.portrait is None:
            raise ValueError("document has no critical portrait to rebuild a state from")
        if self.stages is None:
            lam = Lamination(self.degree, frozenset(self.leaves))
            return PullbackState(
                self.degree, lam, self.portrait, (lam,), "document", self.fpp
            )
        top = max(self.stages, default=0)
        lams = []
        for k in range(top + 1):
            members = frozenset(
                l for l, s in zip(self.leaves, self.stages) if s <= k
            )
            lams.append(Lamination(self.degree, members, depth=k))
        return PullbackState(
            self.degree, lams[0], self.portrait, tuple(lams), "document", self.fpp
        )


def document_from_state(state: PullbackState, command: str = "") -> LaminationDocument:
    """Package a pullback state, tagging each leaf with its first stage."""
    first: dict[Leaf, int] = {}
    for k in range(state.depth + 1):
        for l in state.frontier(k):
            first.setdefault(l, k)
    leaves = tuple(sorted(state.final.leaves))
    return LaminationDocument(
        degree=state.degree,
        leaves=leaves,
        portrait=state.portrait,
        fpp=state.fpp,
        stages=tuple(first[l] for l in leaves),
        command=command,
    )


def _pair_block(pairs: list[list[str]]) -> str:
    # one pair per line; json.dumps handles the string escaping
    if not pairs:
        return "[]"
    body = ",\n".join("    " + json.dumps(p) for p in pairs)
    return "[\n" + body + "\n  ]"


def write_document(doc: LaminationDocument) -> str:
    leaf_pairs = [[_fmt(l.a), _fmt(l.b)] for l in doc.leaves]
    chord_pairs = (
        None
        if doc.portrait is None
        else [[_fmt(c.a), _fmt(c.b)] for c in doc.portrait.sorted_chords]
    )
    out = ["{"]
    out.append(f'  "degree": {doc.degree},')
    out.append(f'  "leaves": {_pair_block(leaf_pairs)},')
    out.append(
        '  "portrait": '
        + ("null" if chord_pairs is None else _pair_block(chord_pairs))
        + ","
    )
    out.append(
        '  "fpp": '
        + ("null" if doc.fpp is None else json.dumps([list(b) for b in doc.fpp.blocks]))
        + ","
    )
    out.append(
        '  "stages": '
        + ("null" if doc.stages is None else json.dumps(list(doc.stages)))
        + ","
    )
    meta = {"tool_version": doc.tool_version, "command": doc.command}
    out.append(f'  "metadata": {json.dumps(meta)}')
    out.append("}")
    return "\n".join(out) + "\n"


def _parse_pair(entry: object, degree: int, what: str) -> Leaf:
    if not isinstance(entry, list) or len(entry) != 2:
        raise ValueError(f"each {what} must be a pair of angle strings")
    a, b = entry
    if not isinstance(a, str) or not isinstance(b, str):
        raise ValueError(f"{what} endpoints must be angle strings, got {entry!r}")
    return Leaf(parse_angle(a, degree), parse_angle(b, degree))


def read_document(text: str) -> LaminationDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("document must be a JSON object")
    unknown = set(payload) - _DOC_KEYS
    if unknown:
        raise ValueError(f"unknown document keys: {sorted(unknown)}")
    if "degree" not in payload or "leaves" not in payload:
        raise ValueError("document needs 'degree' and 'leaves'")
    degree = payload["degree"]
    if not isinstance(degree, int):
        raise ValueError("'degree' must be an integer")
    raw_leaves = payload["leaves"]
    if not isinstance(raw_leaves, list):
        raise ValueError("'leaves' must be a list of angle pairs")
    leaves = tuple(_parse_pair(e, degree, "leaf") for e in raw_leaves)
    portrait = None
    if payload.get("portrait") is not None:
        chords = [_parse_pair(e, degree, "portrait chord") for e in payload["portrait"]]
        portrait = CriticalPortrait(degree, frozenset(chords))
    fpp = None
    if payload.get("fpp") is not None:
        raw_fpp = payload["fpp"]
        if not isinstance(raw_fpp, list):
            raise ValueError("'fpp' must be a list of index blocks")
        fpp = FixedPointPortrait(degree, tuple(tuple(b) for b in raw_fpp))
    stages = None
    if payload.get("stages") is not None:
        raw_stages = payload["stages"]
        if not isinstance(raw_stages, list) or not all(
            isinstance(s, int) for s in raw_stages
        ):
            raise ValueError("'stages' must be a list of integers")
        stages = tuple(raw_stages)
    meta = payload.get("metadata") or {}
    if not isinstance(meta, dict):
        raise ValueError("'metadata' must be an object")
    return LaminationDocument(
        degree=degree,
        leaves=leaves,
        portrait=portrait,
        fpp=fpp,
        stages=stages,
        tool_version=str(meta.get("tool_version", "")),
        command=str(meta.get("command", "")),
    )


def write_portrait(C: CriticalPortrait) -> str:
    pairs = [[_fmt(c.a), _fmt(c.b)] for c in C.sorted_chords]
    return (
        "{\n"
        + f'  "degree": {C.degree},\n'
        + f'  "chords": {_pair_block(pairs)}\n'
        + "}\n"
    )


def read_portrait(text: str) -> CriticalPortrait:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"portrait is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "degree" not in payload or "chords" not in payload:
        raise ValueError("portrait needs 'degree' and 'chords'")
    degree = payload["degree"]
    if not isinstance(degree, int):
        raise ValueError("'degree' must be an integer")
    chords = [_parse_pair(e, degree, "portrait chord") for e in payload["chords"]]
    return CriticalPortrait(degree, frozenset(chords))


_STYLES = ("straight", "geodesic")
_LABELS = (None, "dnary", "rational")

_DEPTH_COLORS = (
    "#1f77b4",
    "#2ca02c",
    "#ff7f0e",
    "#d62728",
    "#9467bd",
    "#8c564b",
)


@dataclass(frozen=True)
class RenderSpec:
    """Look of an SVG rendering: canvas, chord style, colors, labels.

    Chords are straight segments by default; `geodesic` draws each one as
    the circular arc meeting the unit circle at right angles.  Pullback
    leaves take their color from their stage annotation.
    """

    size: int = 600
    style: str = "straight"
    labels: str | None = None
    background: str = "#ffffff"
    circle_color: str = "#333333"
    fixed_point_color: str = "#c0392b"
    initial_leaf_color: str = "#2c3e50"
    critical_color: str = "#8e44ad"
    depth_colors: tuple[str, ...] = _DEPTH_COLORS

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise ValueError("canvas size must be positive")
        if self.style not in _STYLES:
            raise ValueError(f"style must be one of {_STYLES}, got {self.style!r}")
        if self.labels not in _LABELS:
            raise ValueError(f"labels must be one of {_LABELS[1:]} or omitted")
        if not self.depth_colors:
            raise ValueError("at least one depth color is required")

    def leaf_color(self, depth: int) -> str:
        if depth <= 0:
            return self.initial_leaf_color
        return self.depth_colors[(depth - 1) % len(self.depth_colors)]


def _coord(x: float) -> str:
    # fixed precision keeps output byte-stable and files small
    return f"{x:.4f}"


def write_svg(doc: LaminationDocument, spec: RenderSpec = RenderSpec()) -> str:
    """Render a document to SVG 1.1 text.

    Deterministic: equal document and options give byte-identical output.
    Element order is background, circle, leaves from deepest stage up,
    critical chords, fixed point dots, labels.
    """
    d = doc.degree
    if spec.labels == "dnary" and d > 10:
        raise ValueError("base-d labels are limited to d <= 10; use rational labels")
    size = spec.size
    cx = cy = size / 2
    r = size * 0.46

    def xy(t: CirclePoint) -> tuple[float, float]:
        theta = 2 * math.pi * float(t.value)
        return cx + r * math.cos(theta), cy - r * math.sin(theta)

    def chord_path(l: Leaf) -> str:
        x1, y1 = xy(l.a)
        x2, y2 = xy(l.b)
        span = (l.b.value - l.a.value) % 1
        if spec.style == "straight" or span == Fraction(1, 2):
            return (
                f'M {_coord(x1)} {_coord(y1)} L {_coord(x2)} {_coord(y2)}'
            )
        # run along the short side so the arc formula sees span <= 1/2
        if span > Fraction(1, 2):
            (x1, y1), (x2, y2) = (x2, y2), (x1, y1)
            span = 1 - span
        # circle through both endpoints orthogonal to the main circle:
        # radius r*tan(pi*span), always the minor arc, sweeping clockwise
        # on screen when the start-to-end walk is the short way around
        rho = r * math.tan(math.pi * float(span))
        return (
            f'M {_coord(x1)} {_coord(y1)} '
            f'A {_coord(rho)} {_coord(rho)} 0 0 1 {_coord(x2)} {_coord(y2)}'
        )

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="{spec.background}"/>',
        f'<circle cx="{_coord(cx)}" cy="{_coord(cy)}" r="{_coord(r)}" '
        f'fill="none" stroke="{spec.circle_color}" stroke-width="1.5"/>',
    ]

    stages = doc.stages if doc.stages is not None else tuple(0 for _ in doc.leaves)
    by_depth: dict[int, list[Leaf]] = {}
    for l, s in zip(doc.leaves, stages):
        by_depth.setdefault(s, []).append(l)
    for depth in sorted(by_depth, reverse=True):
        color = spec.leaf_color(depth)
        for l in sorted(by_depth[depth]):
            lines.append(
                f'<path d="{chord_path(l)}" fill="none" '
                f'stroke="{color}" stroke-width="1.2"/>'
            )

    if doc.portrait is not None:
        for c in doc.portrait.sorted_chords:
            lines.append(
                f'<path d="{chord_path(c)}" fill="none" '
                f'stroke="{spec.critical_color}" stroke-width="1.2" '
                f'stroke-dasharray="5 4"/>'
            )

    dot = max(2.0, size / 200)
    for i in range(d - 1):
        fx, fy = xy(CirclePoint(Fraction(i, d - 1)))
        lines.append(
            f'<circle cx="{_coord(fx)}" cy="{_coord(fy)}" r="{_coord(dot)}" '
            f'fill="{spec.fixed_point_color}"/>'
        )

    if spec.labels is not None:
        pts = sorted({p for l in doc.leaves for p in (l.a, l.b)})
        rr = r * 1.07
        fs = max(8, size // 55)
        for p in pts:
            theta = 2 * math.pi * float(p.value)
            lx = cx + rr * math.cos(theta)
            ly = cy - rr * math.sin(theta)
            text = _fmt(p) if spec.labels == "rational" else str(render_dnary(p, d))
            lines.append(
                f'<text x="{_coord(lx)}" y="{_coord(ly)}" font-size="{fs}" '
                f'font-family="monospace" text-anchor="middle" '
                f'dominant-baseline="middle" '
                f'fill="{spec.circle_color}">{text}</text>'
            )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
