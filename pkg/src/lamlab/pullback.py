"""Critical portraits, inverse branches, and the stagewise preimage scheme.

A maximal critical portrait cuts the disk into d sectors on which the
d-tupling map is injective, so chord systems can be pulled back stage by
stage: every leaf added at the previous stage receives a full set of d
pairwise disjoint preimage chords compatible with the portrait.  The stages
nest and stay sibling invariant.  On top of the raw scheme this module checks
the diagnostics of canonically constructed states (length decay, escape to
the initial set, invariant gap faces per fixed sector) and classifies the
fixed objects carried by each sector.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from math import lcm

import numpy as np

from .circle import CirclePoint, angle, check_degree, in_arc, preimages, sigma
from .fpp import FixedPointPortrait, FixedSector, canonical_portraits, fixed_sectors
from .leaves import (
    Arc,
    Face,
    Lamination,
    Leaf,
    Polygon,
    faces,
    is_critical,
    leaf_image,
    leaves_cross,
    validate_prelamination,
)


class InsufficientDepthError(ValueError):
    """The available stages are too shallow to certify the requested structure."""


@dataclass(frozen=True)
class CriticalPortrait:
    """A maximal collection of pairwise non-crossing critical chords.

    Chords may share endpoints; a connected group on k endpoints counts
    k - 1 toward the criticality total, which must be exactly degree - 1.
    """

    degree: int
    chords: frozenset[Leaf]

    def __post_init__(self) -> None:
        check_degree(self.degree)
        object.__setattr__(self, "chords", frozenset(self.chords))
        for c in self.chords:
            if not is_critical(self.degree, c):
                raise ValueError(f"chord {c} is not critical for degree {self.degree}")
        cs = self.sorted_chords
        for i, c1 in enumerate(cs):
            for c2 in cs[i + 1 :]:
                if leaves_cross(c1, c2):
                    raise ValueError(f"critical chords {c1} and {c2} cross")
        total = self.criticality
        if total != self.degree - 1:
            raise ValueError(
                f"criticality {total} does not match degree - 1 = {self.degree - 1}"
            )

    @cached_property
    def sorted_chords(self) -> tuple[Leaf, ...]:
        return tuple(sorted(self.chords))

    @cached_property
    def vertex_groups(self) -> tuple[tuple[CirclePoint, ...], ...]:
        """Endpoint-connected chord groups as sorted vertex tuples."""
        parent: dict[CirclePoint, CirclePoint] = {}

        def find(x: CirclePoint) -> CirclePoint:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.chords:
            parent.setdefault(c.a, c.a)
            parent.setdefault(c.b, c.b)
        for c in self.chords:
            ra, rb = find(c.a), find(c.b)
            if ra != rb:
                parent[ra] = rb
        groups: dict[CirclePoint, list[CirclePoint]] = {}
        for v in parent:
            groups.setdefault(find(v), []).append(v)
        return tuple(sorted(tuple(sorted(g)) for g in groups.values()))

    @cached_property
    def criticality(self) -> int:
        """Sum over endpoint-connected chord groups of (vertex count - 1)."""
        return sum(len(g) - 1 for g in self.vertex_groups)


@dataclass(frozen=True)
class CriticalSector:
    """One complementary region of a critical portrait's chords.

    The boundary arcs total 1/d, so the sector boundary maps onto the circle
    with degree one and carries a branch of the inverse.
    """

    degree: int
    chords: tuple[Leaf, ...]
    arcs: tuple[Arc, ...]

    @property
    def terminal(self) -> bool:
        return len(self.chords) == 1

    @property
    def arc_total(self) -> Fraction:
        return sum((a.length for a in self.arcs), Fraction(0))

    def contains_point(self, t: CirclePoint, closed: bool = True) -> bool:
        return any(a.contains(t, closed=closed) for a in self.arcs)

    def branch(self, t: CirclePoint) -> CirclePoint:
        return branch_inverse(self, t)


def critical_sectors(C: CriticalPortrait) -> list[CriticalSector]:
    """The d sectors cut out by the portrait, each spanning arc length 1/d."""
    d = C.degree
    out = []
    for f in faces(Lamination(d, C.chords)):
        if not f.arcs:
            continue  # interior of an all-critical polygon, not a sector
        out.append(CriticalSector(d, tuple(sorted(f.leaves)), tuple(sorted(f.arcs))))
    out.sort(key=lambda s: s.arcs[0])
    if len(out) != d or any(s.arc_total != Fraction(1, d) for s in out):
        raise ValueError("portrait does not cut the circle into d unit-degree sectors")
    return out


def branch_inverse(S: CriticalSector, t: CirclePoint) -> CirclePoint:
    """The unique preimage of t on the closure of S's arcs.

    At a shared chord endpoint two preimages lie on the closed boundary; the
    arc start is preferred so adjacent sectors agree at the seam.
    """
    cands = [x for x in preimages(S.degree, t) if S.contains_point(x, closed=True)]
    if not cands:
        raise ValueError(f"no preimage of {t} lies on the sector closure")
    if len(cands) == 1:
        return cands[0]
    starts = {a.start for a in S.arcs}
    anchored = [x for x in cands if x in starts]
    return anchored[0] if anchored else cands[0]


@dataclass(frozen=True)
class PullbackState:
    """Nested stages F_0 <= F_1 <= ... <= F_n of the preimage construction.

    `policy` records how sibling matchings were selected; `fpp` is set when
    the initial set came from a fixed point portrait's hull.
    """

    degree: int
    initial: Lamination
    portrait: CriticalPortrait
    stages: tuple[Lamination, ...]
    policy: str
    fpp: FixedPointPortrait | None = None

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("a state needs at least stage 0")
        if self.stages[0].leaves != self.initial.leaves:
            raise ValueError("stage 0 must equal the initial lamination")
        prev: frozenset[Leaf] = frozenset()
        for lam in self.stages:
            if lam.degree != self.degree:
                raise ValueError("all stages must share the state's degree")
            if not prev <= lam.leaves:
                raise ValueError("stages must be nested")
            prev = lam.leaves

    @property
    def final(self) -> Lamination:
        return self.stages[-1]

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def frontier(self, k: int) -> frozenset[Leaf]:
        """Leaves first appearing at stage k."""
        if k == 0:
            return self.stages[0].leaves
        return self.stages[k].leaves - self.stages[k - 1].leaves


_POLICIES = ("prefer-existing", "shortest")


def _scaled(t: CirclePoint, denom: int) -> int:
    v = t.value
    q, r = divmod(denom, v.denominator)
    assert r == 0, "common denominator too coarse"
    return v.numerator * q


def _int_pairs_cross(x1: int, y1: int, x2: int, y2: int) -> bool:
    # endpoints normalized x < y; a shared endpoint never counts as crossing
    if x2 in (x1, y1) or y2 in (x1, y1):
        return False
    return (x1 < x2 < y1) != (x1 < y2 < y1)


def _best_matching(
    d: int,
    l: Leaf,
    acc_a: np.ndarray,
    acc_b: np.ndarray,
    acc_pairs: set[tuple[int, int]],
    denom: int,
    policy: str,
) -> tuple[tuple[int, int], ...]:
    """Pick the d disjoint preimage chords of l, returned as scaled endpoint pairs.

    Candidate chord (i, j) joins the i-th preimage of l.a to the j-th of l.b.
    Validity against everything already placed is vectorized; the policy then
    ranks the valid perfect matchings of the two preimage fibers.
    """
    fib_a = [_scaled(t, denom) for t in preimages(d, l.a)]
    fib_b = [_scaled(t, denom) for t in preimages(d, l.b)]
    lo = [[0] * d for _ in range(d)]
    hi = [[0] * d for _ in range(d)]
    ok = [[False] * d for _ in range(d)]
    short = [[0] * d for _ in range(d)]
    reused = [[False] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            x, y = (fib_a[i], fib_b[j]) if fib_a[i] < fib_b[j] else (fib_b[j], fib_a[i])
            lo[i][j], hi[i][j] = x, y
            span = y - x
            short[i][j] = min(span, denom - span)
            inside_a = (acc_a > x) & (acc_a < y)
            inside_b = (acc_b > x) & (acc_b < y)
            share = (acc_a == x) | (acc_a == y) | (acc_b == x) | (acc_b == y)
            ok[i][j] = not bool(((inside_a != inside_b) & ~share).any())
            reused[i][j] = (x, y) in acc_pairs
    cells = [(i, j) for i in range(d) for j in range(d)]
    cross = {}
    for (i, j), (k, m) in itertools.combinations(cells, 2):
        cross[(i, j, k, m)] = _int_pairs_cross(lo[i][j], hi[i][j], lo[k][m], hi[k][m])

    best_key = None
    best: tuple[tuple[int, int], ...] | None = None
    for perm in itertools.permutations(range(d)):
        if not all(ok[i][perm[i]] for i in range(d)):
            continue
        clash = False
        for i in range(d):
            for k in range(i + 1, d):
                key = (i, perm[i], k, perm[k]) if (i, perm[i]) < (k, perm[k]) else (k, perm[k], i, perm[i])
                if cross[key]:
                    clash = True
                    break
            if clash:
                break
        if clash:
            continue
        maxlen = max(short[i][perm[i]] for i in range(d))
        reuse = sum(1 for i in range(d) if reused[i][perm[i]])
        pairs = tuple(sorted((lo[i][perm[i]], hi[i][perm[i]]) for i in range(d)))
        if policy == "shortest":
            rank = (maxlen, -reuse, pairs)
        else:
            rank = (-reuse, maxlen, pairs)
        if best_key is None or rank < best_key:
            best_key, best = rank, pairs
    if best is None:
        raise ValueError(f"no compatible sibling matching exists for {l}")
    return best


def pullback(
    F0: Lamination, C: CriticalPortrait, n: int, *, policy: str = "prefer-existing"
) -> PullbackState:
    """Grow n preimage stages of F0 along the sectors of C.

    F0 must be forward invariant (leaf images back in F0, or degenerate) and
    the portrait chords may touch F0 leaves only at shared endpoints.  Each
    stage adds, per leaf of the previous frontier, the d disjoint preimage
    chords selected by the policy:

    - "prefer-existing": reuse already-placed chords whenever possible, then
      shortest; this keeps refinements aligned with the coarser stages.
    - "shortest": minimize the longest added chord, which forces the stage-k
      additions under the 1/(2 d^k) decay bound.
    """
    if policy not in _POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if n < 0:
        raise ValueError("stage count must be >= 0")
    d = F0.degree
    if d != C.degree:
        raise ValueError("degree mismatch between initial set and portrait")
    bad = validate_prelamination(F0)
    if bad:
        raise ValueError(f"initial set is not a pre-lamination: {bad[0].message}")
    for c in C.chords:
        for l in F0.leaves:
            if leaves_cross(c, l):
                raise ValueError(f"critical chord {c} crosses initial leaf {l}")
    for l in F0.leaves:
        if is_critical(d, l):
            continue
        img = leaf_image(d, l)
        if img not in F0.leaves:
            raise ValueError(f"initial leaf {l} maps to {img} outside the initial set")

    base = 1
    for l in itertools.chain(F0.leaves, C.chords):
        base = lcm(base, l.a.value.denominator, l.b.value.denominator)

    stages = [Lamination(d, F0.leaves, depth=0)]
    acc: set[Leaf] = set(F0.leaves)
    for k in range(1, n + 1):
        denom = base * d**k
        prev = stages[-2].leaves if k >= 2 else frozenset()
        frontier = sorted(stages[-1].leaves - prev)
        lo_list = [_scaled(l.a, denom) for l in sorted(acc)] + [
            _scaled(c.a, denom) for c in C.sorted_chords
        ]
        hi_list = [_scaled(l.b, denom) for l in sorted(acc)] + [
            _scaled(c.b, denom) for c in C.sorted_chords
        ]
        acc_pairs = set(zip(lo_list, hi_list))
        for l in frontier:
            acc_a = np.array(lo_list, dtype=np.int64)
            acc_b = np.array(hi_list, dtype=np.int64)
            for x, y in _best_matching(d, l, acc_a, acc_b, acc_pairs, denom, policy):
                if (x, y) in acc_pairs:
                    continue
                acc_pairs.add((x, y))
                lo_list.append(x)
                hi_list.append(y)
                acc.add(Leaf(angle(Fraction(x, denom)), angle(Fraction(y, denom))))
        stages.append(Lamination(d, frozenset(acc), depth=k))
    return PullbackState(d, stages[0], C, tuple(stages), policy)


def canonical_lamination(P: FixedPointPortrait, n: int) -> PullbackState:
    """Pull back the portrait's hull leaves under its first canonical placement.

    Matchings use the "shortest" policy, which keeps every stage-k addition
    within the 1/(2 d^k) length bound.
    """
    choice = canonical_portraits(P)[0]
    F0 = Lamination(P.degree, P.hull_leaves)
    state = pullback(F0, choice.as_critical_portrait(), n, policy="shortest")
    return replace(state, fpp=P)


@dataclass(frozen=True)
class PortraitPullbackReport:
    """Stagewise comparison of pullbacks across all canonical placements."""

    portrait: FixedPointPortrait
    depth: int
    choice_count: int
    equal: bool
    mismatches: tuple[str, ...]


def cp_pullback_equality(P: FixedPointPortrait, n: int) -> PortraitPullbackReport:
    """Whether every canonical placement of P pulls back to the same stages.

    Stage leaf sets are compared with each run's own critical chords removed,
    for every stage 1..n.
    """
    F0 = Lamination(P.degree, P.hull_leaves)
    runs = []
    for choice in canonical_portraits(P):
        st = pullback(F0, choice.as_critical_portrait(), n)
        runs.append((choice.chords, st))
    mismatches: list[str] = []
    ref_chords, ref_state = runs[0]
    for k in range(1, n + 1):
        ref = ref_state.stages[k].leaves - ref_chords
        for idx, (ch, st) in enumerate(runs[1:], start=1):
            got = st.stages[k].leaves - ch
            if got != ref:
                mismatches.append(
                    f"stage {k}: choice {idx} differs from choice 0 "
                    f"by {len(got ^ ref)} leaves"
                )
                break
    return PortraitPullbackReport(P, n, len(runs), not mismatches, tuple(mismatches))


def _iterates_onto(d: int, l: Leaf, targets: set[Leaf], cap: int) -> bool:
    cur = l
    for _ in range(cap + 1):
        if cur in targets:
            return True
        img = leaf_image(d, cur)
        if isinstance(img, CirclePoint):
            return False
        cur = img
    return False


def _gap_candidates(lam: Lamination, S: FixedSector, chords: list[Leaf]) -> list[Face]:
    out = []
    for f in faces(lam):
        verts = f.vertices
        vset = set(verts)
        if not all(S.contains_point(v) for v in verts):
            continue
        if not all(sigma(lam.degree, v) in vset for v in verts):
            continue
        if not all(f.on_closure(c.a) and f.on_closure(c.b) for c in chords):
            continue
        out.append(f)
    return out


def _walk_back_gap(state: PullbackState, S: FixedSector) -> tuple[Face, int] | None:
    """Deepest stage carrying exactly one invariant gap face inside S.

    Refined stages can temporarily lose boundary-vertex invariance (preimages
    of other sectors' leaves land on the gap arcs), so shallower stages are
    consulted when a stage offers no unique candidate.
    """
    sector_chords = [c for c in state.portrait.sorted_chords if S.contains_leaf(c)]
    for k in range(state.depth, 0, -1):
        cands = _gap_candidates(state.stages[k], S, sector_chords)
        if len(cands) == 1:
            return cands[0], k
    return None


def invariant_gap(state: PullbackState, S: FixedSector) -> Face:
    """The face inside S with forward-invariant boundary vertices.

    The face must also carry, on its closure, every portrait chord whose
    endpoints lie in S.  The deepest stage with a unique such face wins.
    """
    if state.depth < 1:
        raise ValueError("need at least one pullback stage")
    found = _walk_back_gap(state, S)
    if found is None:
        raise ValueError("no invariant gap face in this sector")
    return found[0]


@dataclass(frozen=True)
class SectorGapReport:
    """Invariant-gap diagnostics for one fixed sector."""

    sector: FixedSector
    gap_depth: int
    vertex_count: int
    unresolved: tuple[Leaf, ...]

    @property
    def ok(self) -> bool:
        return self.gap_depth >= 1 and not self.unresolved


@dataclass(frozen=True)
class CanonicalReport:
    """Diagnostics of a canonically constructed state.

    `escape_failures` lists (stage, leaf) pairs that fail to iterate into the
    initial set within their stage index; `length_failures` lists stage-k
    additions longer than 1/(2 d^k); `sector_reports` covers the per-sector
    invariant gap checks.
    """

    degree: int
    depth: int
    escape_failures: tuple[tuple[int, Leaf], ...]
    length_failures: tuple[tuple[int, Leaf], ...]
    max_new_length: tuple[Fraction, ...]
    sector_reports: tuple[SectorGapReport, ...]

    @property
    def ok(self) -> bool:
        return (
            not self.escape_failures
            and not self.length_failures
            and all(r.ok for r in self.sector_reports)
        )


def clp_checks(state: PullbackState) -> CanonicalReport:
    """Verify the stage diagnostics of a canonically built state.

    Checks that stage-k additions iterate into the initial set within k steps
    and respect the 1/(2 d^k) length bound, and that every fixed sector
    carries an invariant gap face whose boundary leaves iterate onto that
    sector's own hull leaves.
    """
    if state.fpp is None:
        raise ValueError("state was not built from a fixed point portrait")
    d = state.degree
    initial = set(state.stages[0].leaves)
    escapes: list[tuple[int, Leaf]] = []
    too_long: list[tuple[int, Leaf]] = []
    worst: list[Fraction] = []
    for k in range(1, state.depth + 1):
        bound = Fraction(1, 2 * d**k)
        stage_max = Fraction(0)
        for l in sorted(state.frontier(k)):
            if l.length > bound:
                too_long.append((k, l))
            stage_max = max(stage_max, l.length)
            if not _iterates_onto(d, l, initial, k):
                escapes.append((k, l))
        worst.append(stage_max)
    sector_reports: list[SectorGapReport] = []
    if state.depth >= 1:
        for S in fixed_sectors(state.fpp):
            found = _walk_back_gap(state, S)
            if found is None:
                sector_reports.append(SectorGapReport(S, 0, 0, ()))
                continue
            face, gap_depth = found
            hull = set(S.boundary_leaves)
            unresolved = tuple(
                sorted(
                    l
                    for l in face.leaves
                    if not _iterates_onto(d, l, hull, state.depth)
                )
            )
            sector_reports.append(
                SectorGapReport(S, gap_depth, len(face.vertices), unresolved)
            )
    return CanonicalReport(
        d,
        state.depth,
        tuple(escapes),
        tuple(too_long),
        tuple(worst),
        tuple(sector_reports),
    )


def is_hyperbolic_approx(L: Lamination, C: CriticalPortrait, depth: int) -> bool:
    """Whether every portrait chord sits inside a face with recurring boundary.

    Finite-depth necessary condition: the face carrying a chord must have all
    its boundary leaves revisit an earlier image within the iteration cap.  A
    chord that is itself a leaf of L, or that crosses L, fails.
    """
    if L.degree != C.degree:
        raise ValueError("degree mismatch")
    if not L.leaves:
        return True
    cap = max(2 * depth + 2, 4)
    subdivision = faces(L)
    for chord in C.sorted_chords:
        if chord in L.leaves:
            return False
        carriers = [
            f
            for f in subdivision
            if f.on_closure(chord.a)
            and f.on_closure(chord.b)
            and not any(leaves_cross(b, chord) for b in f.leaves)
        ]
        if len(carriers) != 1:
            return False
        for b in carriers[0].leaves:
            seen = {b}
            cur = b
            recurred = False
            for _ in range(cap):
                img = leaf_image(L.degree, cur)
                if isinstance(img, CirclePoint):
                    return False
                cur = img
                if cur in seen:
                    recurred = True
                    break
                seen.add(cur)
            if not recurred:
                return False
    return True


@dataclass(frozen=True)
class FixedObject:
    """A connected piece of a sector's fixed boundary: hull component or lone fixed point."""

    points: tuple[CirclePoint, ...]
    leaves: tuple[Leaf, ...]
    subtended: bool


@dataclass(frozen=True)
class SectorClassification:
    """Outcome of the fixed-object analysis inside one fixed sector.

    Case 1: no object subtended; case 2: all; case 3: some.  The witness is
    an invariant gap face (type 1) or a rotational polygon face (type 2).
    """

    sector: FixedSector
    case: int
    witness_type: int
    objects: tuple[FixedObject, ...]
    witness: Face
    rotation: Fraction | None = None


def _boundary_objects(S: FixedSector) -> list[tuple[tuple[CirclePoint, ...], tuple[Leaf, ...]]]:
    parent: dict[CirclePoint, CirclePoint] = {}

    def find(x: CirclePoint) -> CirclePoint:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for l in S.boundary_leaves:
        parent.setdefault(l.a, l.a)
        parent.setdefault(l.b, l.b)
    for l in S.boundary_leaves:
        ra, rb = find(l.a), find(l.b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[CirclePoint, tuple[set[CirclePoint], list[Leaf]]] = {}
    for l in S.boundary_leaves:
        pts, lvs = groups.setdefault(find(l.a), (set(), []))
        pts.update(l.endpoints)
        lvs.append(l)
    objects = [
        (tuple(sorted(pts)), tuple(sorted(lvs))) for pts, lvs in groups.values()
    ]
    for p in S.sector_fixed_points:
        if p not in parent:
            objects.append(((p,), ()))
    objects.sort()
    return objects


def _separates(l: Leaf, pts: tuple[CirclePoint, ...], others: set[CirclePoint]) -> bool:
    for u, v in l.short_arcs():
        if all(in_arc(p, u, v) for p in pts) and not any(in_arc(q, u, v) for q in others):
            return True
    return False


def classify_sector(L: Lamination, C: CriticalPortrait, S: FixedSector) -> SectorClassification:
    """Classify the fixed objects on S's boundary against the leaves of L.

    An object is subtended when some non-boundary leaf of L separates it from
    every other object of the sector.  No subtended object yields case 1, all
    yields case 2 (with a rotational polygon witness), a mix yields case 3.
    """
    if L.degree != C.degree or L.degree != S.degree:
        raise ValueError("degree mismatch")
    if L.depth < 1:
        raise InsufficientDepthError("insufficient depth: need at least stage 1 leaves")
    raw = _boundary_objects(S)
    boundary = set(S.boundary_leaves)
    inside = [
        l for l in sorted(L.leaves) if l not in boundary and S.contains_leaf(l)
    ]
    flags: list[bool] = []
    for i, (pts, _) in enumerate(raw):
        others = {q for j, (qs, _) in enumerate(raw) if j != i for q in qs}
        flags.append(any(_separates(l, pts, others) for l in inside))
    objects = tuple(
        FixedObject(pts, lvs, flag) for (pts, lvs), flag in zip(raw, flags)
    )
    if flags and all(flags):
        witness, rho = _rotational_polygon_witness(L, S)
        return SectorClassification(S, 2, 2, objects, witness, rho)
    case = 3 if any(flags) else 1
    witness = _gap_witness(L, S, objects)
    return SectorClassification(S, case, 1, objects, witness, None)


def _rotational_polygon_witness(L: Lamination, S: FixedSector) -> tuple[Face, Fraction]:
    from .rotation import NotRotational, rotation_number

    cands: list[tuple[Face, Fraction]] = []
    for f in faces(L):
        if not f.is_polygon():
            continue
        verts = f.vertices
        vset = set(verts)
        if not all(S.contains_point(v) for v in verts):
            continue
        if not all(sigma(L.degree, v) in vset for v in verts):
            continue
        try:
            rho = rotation_number(L.degree, verts)
        except NotRotational:
            continue
        if rho == 0:
            continue
        cands.append((f, rho))
    if len(cands) != 1:
        raise InsufficientDepthError(
            f"insufficient depth: found {len(cands)} rotational polygon faces, expected 1"
        )
    return cands[0]


def _gap_witness(
    L: Lamination, S: FixedSector, objects: tuple[FixedObject, ...]
) -> Face:
    required = [o for o in objects if not o.subtended]
    cands: list[Face] = []
    for f in faces(L):
        if f.is_polygon():
            continue
        verts = f.vertices
        vset = set(verts)
        if not all(S.contains_point(v) for v in verts):
            continue
        if not all(sigma(L.degree, v) in vset for v in verts):
            continue
        if not all(f.on_closure(p) for o in required for p in o.points):
            continue
        cands.append(f)
    subtended = [o for o in objects if o.subtended]
    if len(cands) > 1 and subtended:
        # A face pinched off behind a leaf joining two distinct required
        # objects only ever touches those two; when every subtended object
        # sits beyond the pinch it cannot be the sector's gap.
        owner: dict[CirclePoint, int] = {}
        for i, o in enumerate(objects):
            if not o.subtended:
                for p in o.points:
                    owner[p] = i
        cands = [f for f in cands if not _pinched_off(f, owner, subtended)]
    if len(cands) != 1:
        raise InsufficientDepthError(
            f"insufficient depth: found {len(cands)} invariant gap faces, expected 1"
        )
    return cands[0]


def _pinched_off(
    f: Face, owner: dict[CirclePoint, int], subtended: list[FixedObject]
) -> bool:
    for b in f.leaves:
        ia, ib = owner.get(b.a), owner.get(b.b)
        if ia is None or ib is None or ia == ib:
            continue
        for u, v in ((b.a, b.b), (b.b, b.a)):
            beyond = all(in_arc(p, u, v) for o in subtended for p in o.points)
            if beyond and not any(in_arc(w, u, v) for w in f.vertices):
                return True
    return False


@dataclass(frozen=True)
class FlowerLike:
    """An invariant center together with the attached recurring faces."""

    center_vertices: tuple[CirclePoint, ...]
    center_edges: tuple[Leaf, ...]
    attached: tuple[Face, ...]

    @property
    def petal_count(self) -> int:
        return len(self.attached)


def _recurring_face(d: int, f: Face, cap: int) -> bool:
    vset = set(f.vertices)
    image = vset
    settled = False
    for _ in range(cap):
        image = {sigma(d, v) for v in image}
        if image <= vset:
            settled = True
            break
    if not settled:
        return False
    for b in f.leaves:
        seen = {b}
        cur = b
        recurred = False
        for _ in range(cap):
            img = leaf_image(d, cur)
            if isinstance(img, CirclePoint):
                return False
            cur = img
            if cur in seen:
                recurred = True
                break
            seen.add(cur)
        if not recurred:
            return False
    return True


def flower_like(L: Lamination, G: Polygon | Face | Leaf) -> FlowerLike:
    """The faces of L sharing an edge with G whose boundaries keep recurring.

    G's vertex set must map into itself.  A neighbor qualifies when some
    iterate maps its vertex set into itself and each of its boundary leaves
    revisits an earlier image, both within a cap tied to L's stage depth.
    """
    if isinstance(G, Leaf):
        verts: tuple[CirclePoint, ...] = G.endpoints
        edges: tuple[Leaf, ...] = (G,)
    elif isinstance(G, Polygon):
        verts = G.vertices
        edges = G.sides
    else:
        verts = G.vertices
        edges = G.leaves
    vset = set(verts)
    for v in verts:
        if sigma(L.degree, v) not in vset:
            raise ValueError(f"center vertex {v} maps outside the center")
    edge_set = set(edges)
    cap = L.depth + 2
    attached = [
        f
        for f in faces(L)
        if set(f.leaves) != edge_set
        and set(f.leaves) & edge_set
        and _recurring_face(L.degree, f, cap)
    ]
    attached.sort(key=lambda f: f.vertices)
    return FlowerLike(tuple(sorted(vset)), tuple(sorted(edge_set)), tuple(attached))
