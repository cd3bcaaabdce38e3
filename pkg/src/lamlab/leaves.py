"""Chords of the disk, leaf dynamics, finite laminations, and their checkers.

A leaf is an unordered pair of distinct circle points.  Finite leaf sets with
pairwise non-crossing leaves approximate invariant laminations; the checkers
here verify the non-crossing condition, forward/backward/sibling invariance
between successive approximation stages, and compute the planar face
subdivision that the chords induce on the disk.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .circle import CirclePoint, angle, ccw_span, check_degree, in_arc, preimages, sigma

__all__ = [
    "Arc",
    "Face",
    "Lamination",
    "Leaf",
    "Polygon",
    "SiblingCollection",
    "Violation",
    "check_invariance",
    "faces",
    "grand_orbit_truncated",
    "is_critical",
    "leaf_image",
    "leaves_cross",
    "sibling_collections",
    "validate_prelamination",
]


@dataclass(frozen=True, order=True)
class Leaf:
    """An unordered chord {a, b} of the closed unit disk, a != b.

    Stored with a < b (as representatives in [0,1)), so equality and ordering
    are structural.
    """

    a: CirclePoint
    b: CirclePoint

    def __post_init__(self) -> None:
        pa, pb = angle(self.a), angle(self.b)
        if pa == pb:
            raise ValueError(f"degenerate leaf at {pa}")
        if pb < pa:
            pa, pb = pb, pa
        object.__setattr__(self, "a", pa)
        object.__setattr__(self, "b", pb)

    @property
    def endpoints(self) -> tuple[CirclePoint, CirclePoint]:
        return (self.a, self.b)

    @property
    def length(self) -> Fraction:
        """Shorter arc distance between the endpoints, in (0, 1/2]."""
        span = self.b.value - self.a.value
        return min(span, 1 - span)

    def has_endpoint(self, t: CirclePoint) -> bool:
        return t == self.a or t == self.b

    def other(self, t: CirclePoint) -> CirclePoint:
        if t == self.a:
            return self.b
        if t == self.b:
            return self.a
        raise ValueError(f"{t} is not an endpoint of {self}")

    def short_arcs(self) -> tuple[tuple[CirclePoint, CirclePoint], ...]:
        """The subtended arc(s) on the shorter side, as (start, end) pairs.

        For a leaf of length exactly 1/2 both arcs tie and both are returned.
        """
        if 2 * self.length == 1:
            return ((self.a, self.b), (self.b, self.a))
        if self.b.value - self.a.value <= Fraction(1, 2):
            return ((self.a, self.b),)
        return ((self.b, self.a),)

    def __repr__(self) -> str:
        return f"Leaf({self.a}, {self.b})"


@dataclass(frozen=True, order=True)
class Polygon:
    """A convex inscribed polygon: >= 3 distinct circle points, stored sorted."""

    vertices: tuple[CirclePoint, ...]

    def __post_init__(self) -> None:
        verts = tuple(sorted(angle(v) for v in self.vertices))
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise ValueError("polygon vertices must be distinct")
        object.__setattr__(self, "vertices", verts)

    @property
    def sides(self) -> tuple[Leaf, ...]:
        n = len(self.vertices)
        return tuple(
            Leaf(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)
        )


def leaf_image(d: int, l: Leaf) -> Leaf | CirclePoint:
    """Image of a leaf under the d-tupling map; a CirclePoint when it collapses."""
    ia, ib = sigma(d, l.a), sigma(d, l.b)
    if ia == ib:
        return ia
    return Leaf(ia, ib)


def is_critical(d: int, l: Leaf) -> bool:
    """Whether both endpoints share an image, i.e. they differ by some k/d."""
    check_degree(d)
    return ((l.b.value - l.a.value) * d).denominator == 1


def leaves_cross(l1: Leaf, l2: Leaf) -> bool:
    """Strict interleaving of endpoints; sharing an endpoint never crosses."""
    if l1.has_endpoint(l2.a) or l1.has_endpoint(l2.b):
        return False
    return in_arc(l2.a, l1.a, l1.b) != in_arc(l2.b, l1.a, l1.b)


@dataclass(frozen=True)
class SiblingCollection:
    """Exactly d pairwise-disjoint leaves sharing one non-degenerate image."""

    degree: int
    leaves: frozenset[Leaf]

    def __post_init__(self) -> None:
        check_degree(self.degree)
        leaves = frozenset(self.leaves)
        object.__setattr__(self, "leaves", leaves)
        if len(leaves) != self.degree:
            raise ValueError(f"expected {self.degree} leaves, got {len(leaves)}")
        images = {leaf_image(self.degree, l) for l in leaves}
        if len(images) != 1 or not isinstance(next(iter(images)), Leaf):
            raise ValueError("members must share a single non-degenerate image")
        for l1, l2 in itertools.combinations(leaves, 2):
            if l1.has_endpoint(l2.a) or l1.has_endpoint(l2.b):
                raise ValueError(f"{l1} and {l2} share an endpoint")
            if leaves_cross(l1, l2):
                raise ValueError(f"{l1} and {l2} cross")

    @property
    def image(self) -> Leaf:
        img = leaf_image(self.degree, next(iter(self.leaves)))
        assert isinstance(img, Leaf)
        return img

    @property
    def sorted_leaves(self) -> tuple[Leaf, ...]:
        return tuple(sorted(self.leaves))


def sibling_collections(d: int, l: Leaf) -> list[SiblingCollection]:
    """All full collections of d disjoint preimage leaves of image(l) containing l.

    Each member connects one preimage of each image endpoint; the two fibers
    are disjoint point sets, so distinct members can never share endpoints and
    only the non-crossing condition needs checking.
    """
    img = leaf_image(d, l)
    if not isinstance(img, Leaf):
        raise ValueError(f"{l} is critical; sibling collections are undefined")
    xs = preimages(d, img.a)
    ys = preimages(d, img.b)
    found: list[SiblingCollection] = []
    used = [False] * d
    chosen: list[Leaf] = []

    def extend(i: int) -> None:
        if i == d:
            if l in chosen:
                found.append(SiblingCollection(d, frozenset(chosen)))
            return
        for j in range(d):
            if used[j]:
                continue
            m = Leaf(xs[i], ys[j])
            if any(leaves_cross(m, c) for c in chosen):
                continue
            used[j] = True
            chosen.append(m)
            extend(i + 1)
            chosen.pop()
            used[j] = False

    extend(0)
    found.sort(key=lambda c: c.sorted_leaves)
    return found


@dataclass(frozen=True)
class Lamination:
    """A finite non-crossing-intended leaf set with a degree and a stage tag."""

    degree: int
    leaves: frozenset[Leaf]
    depth: int = 0

    def __post_init__(self) -> None:
        check_degree(self.degree)
        object.__setattr__(self, "leaves", frozenset(self.leaves))
        if self.depth < 0:
            raise ValueError("depth must be >= 0")

    @cached_property
    def sorted_leaves(self) -> tuple[Leaf, ...]:
        return tuple(sorted(self.leaves))

    def __contains__(self, l: Leaf) -> bool:
        return l in self.leaves

    def __len__(self) -> int:
        return len(self.leaves)

    def __iter__(self):
        return iter(self.sorted_leaves)


@dataclass(frozen=True)
class Violation:
    """One failed check, with the witnessing leaves."""

    check: str
    detail: str
    leaves: tuple[Leaf, ...] = ()


def validate_prelamination(L: Lamination) -> tuple[Violation, ...]:
    """All crossing pairs; empty iff any two leaves meet at most in an endpoint."""
    out = []
    ls = L.sorted_leaves
    for i, l1 in enumerate(ls):
        for l2 in ls[i + 1 :]:
            if leaves_cross(l1, l2):
                out.append(Violation("crossing", f"{l1} crosses {l2}", (l1, l2)))
    return tuple(out)


def _sibling_matching_exists(d: int, img: Leaf, available: frozenset[Leaf]) -> bool:
    xs = preimages(d, img.a)
    ys = preimages(d, img.b)
    used = [False] * d
    chosen: list[Leaf] = []

    def extend(i: int) -> bool:
        if i == d:
            return True
        for j in range(d):
            if used[j]:
                continue
            m = Leaf(xs[i], ys[j])
            if m not in available:
                continue
            if any(leaves_cross(m, c) for c in chosen):
                continue
            used[j] = True
            chosen.append(m)
            if extend(i + 1):
                return True
            chosen.pop()
            used[j] = False
        return False

    return extend(0)


def check_invariance(L_prev: Lamination, L_next: Lamination) -> tuple[Violation, ...]:
    """Finite-depth invariance report between successive stages.

    For every leaf of L_prev: (a) its image lies in L_next or collapses;
    (b) some preimage leaf lies in L_next; (c) a full collection of d disjoint
    non-crossing leaves with the same image as the leaf exists within L_next.
    Critical leaves are exempt from (c), having no leaf image.
    """
    if L_prev.degree != L_next.degree:
        raise ValueError("degree mismatch between stages")
    if not L_prev.leaves <= L_next.leaves:
        raise ValueError("earlier stage is not contained in the later stage")
    d = L_prev.degree
    out: list[Violation] = []
    for l in L_prev.sorted_leaves:
        img = leaf_image(d, l)
        if isinstance(img, Leaf) and img not in L_next:
            out.append(Violation("forward", f"image {img} of {l} missing", (l,)))
        has_pre = any(
            Leaf(x, y) in L_next
            for x in preimages(d, l.a)
            for y in preimages(d, l.b)
        )
        if not has_pre:
            out.append(Violation("backward", f"no preimage of {l} present", (l,)))
        if isinstance(img, Leaf) and not _sibling_matching_exists(d, img, L_next.leaves):
            out.append(
                Violation("sibling", f"no full sibling collection over {img}", (l,))
            )
    return tuple(out)


@dataclass(frozen=True, order=True)
class Arc:
    """A counterclockwise circle arc from start to end; start == end is the full circle."""

    start: CirclePoint
    end: CirclePoint

    @property
    def length(self) -> Fraction:
        if self.start == self.end:
            return Fraction(1)
        return ccw_span(self.start, self.end)

    def contains(self, t: CirclePoint, closed: bool = True) -> bool:
        """Membership in the arc; `closed` includes the endpoints."""
        if self.start == self.end:
            return True
        if t == self.start or t == self.end:
            return closed
        return in_arc(t, self.start, self.end)


def _element_key(e: Leaf | Arc):
    if isinstance(e, Leaf):
        return (0, e.a, e.b)
    return (1, e.start, e.end)


@dataclass(frozen=True)
class Face:
    """One complementary region of the disk: its cyclic boundary of leaves and arcs."""

    boundary: tuple[Leaf | Arc, ...]

    @property
    def leaves(self) -> tuple[Leaf, ...]:
        return tuple(e for e in self.boundary if isinstance(e, Leaf))

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(e for e in self.boundary if isinstance(e, Arc))

    @cached_property
    def vertices(self) -> tuple[CirclePoint, ...]:
        pts = set()
        for e in self.boundary:
            if isinstance(e, Leaf):
                pts.update(e.endpoints)
            elif e.start != e.end:
                pts.update((e.start, e.end))
        return tuple(sorted(pts))

    def is_polygon(self) -> bool:
        return not self.arcs

    def on_closure(self, t: CirclePoint) -> bool:
        """Whether t lies on this face's circle boundary (a vertex or inside an arc)."""
        return t in self.vertices or any(a.contains(t) for a in self.arcs)


def faces(L: Lamination) -> list[Face]:
    """The planar subdivision of the disk induced by the leaf set.

    Requires a pre-lamination (no crossing pair); crossings are not re-checked
    here.  The empty lamination yields the whole disk, bounded by a full-circle
    arc.  Traversal uses the half-edge rotation system at each endpoint: the
    counterclockwise order of outgoing edges at a vertex is the forward arc,
    then chords by increasing counterclockwise offset, then the backward arc.
    """
    chords = L.sorted_leaves
    if not chords:
        zero = angle(0)
        return [Face((Arc(zero, zero),))]
    verts = sorted({p for l in chords for p in l.endpoints})
    n = len(verts)
    index = {v: i for i, v in enumerate(verts)}

    # half-edge ids: ("c", j, 0) chord j as a->b, ("c", j, 1) as b->a,
    # ("a", i, 0) arc verts[i]->verts[i+1], ("a", i, 1) its reverse
    def target(h):
        kind, j, direction = h
        if kind == "c":
            return chords[j].b if direction == 0 else chords[j].a
        return verts[(j + 1) % n] if direction == 0 else verts[j]

    def reverse(h):
        return (h[0], h[1], 1 - h[2])

    outgoing: dict[CirclePoint, list] = {v: [] for v in verts}
    for j, l in enumerate(chords):
        outgoing[l.a].append(("c", j, 0))
        outgoing[l.b].append(("c", j, 1))
    pred: dict[tuple, tuple] = {}
    for v in verts:
        i = index[v]
        chord_edges = sorted(
            outgoing[v], key=lambda h: ccw_span(v, target(h))
        )
        rotation = [("a", i, 0), *chord_edges, ("a", (i - 1) % n, 1)]
        for k, h in enumerate(rotation):
            pred[h] = rotation[k - 1]

    all_edges = list(pred.keys())
    seen = set()
    out: list[Face] = []
    for start in all_edges:
        if start in seen:
            continue
        cycle = []
        h = start
        while h not in seen:
            seen.add(h)
            cycle.append(h)
            h = pred[reverse(h)]
        if any(kind == "a" and direction == 1 for kind, _, direction in cycle):
            continue  # the region outside the disk
        elements: list[Leaf | Arc] = []
        for kind, j, direction in cycle:
            if kind == "c":
                elements.append(chords[j])
            else:
                elements.append(Arc(verts[j], verts[(j + 1) % n]))
        k0 = min(range(len(elements)), key=lambda k: _element_key(elements[k]))
        out.append(Face(tuple(elements[k0:] + elements[:k0])))
    out.sort(key=lambda f: tuple(_element_key(e) for e in f.boundary))
    return out


def grand_orbit_truncated(
    d: int, L: Lamination, seed: Leaf, max_depth: int
) -> set[Leaf]:
    """Leaves of L meeting the seed's forward orbit within max_depth steps each way."""
    if seed not in L:
        raise ValueError(f"seed {seed} is not a leaf of the lamination")
    targets: set[Leaf] = set()
    cur: Leaf | CirclePoint = seed
    for _ in range(max_depth + 1):
        if not isinstance(cur, Leaf) or cur in targets:
            break
        targets.add(cur)
        cur = leaf_image(d, cur)
    out: set[Leaf] = set()
    for m in L.leaves:
        node: Leaf | CirclePoint = m
        for _ in range(max_depth + 1):
            if not isinstance(node, Leaf):
                break
            if node in targets:
                out.add(m)
                break
            node = leaf_image(d, node)
    return out
