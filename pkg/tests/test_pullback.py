"""Tests for critical portraits, inverse branches, and staged preimage growth."""
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from lamlab.circle import angle, preimages, sigma
from lamlab.fpp import FixedPointPortrait, fixed_sectors
from lamlab.leaves import Lamination, Leaf, Polygon, check_invariance, leaf_image
from lamlab.pullback import (
    CriticalPortrait,
    InsufficientDepthError,
    branch_inverse,
    canonical_lamination,
    classify_sector,
    clp_checks,
    cp_pullback_equality,
    critical_sectors,
    flower_like,
    invariant_gap,
    is_hyperbolic_approx,
    pullback,
)


def fr(p, q=1):
    return Fraction(p, q)


def lf(a, b):
    return Leaf(angle(a), angle(b))


def lam(d, pairs):
    return Lamination(d, frozenset(lf(a, b) for a, b in pairs))


def leaf_set(leaves):
    return {(l.a.value, l.b.value) for l in leaves}


def pairs(entries):
    return {(Fraction(a), Fraction(b)) for a, b in entries}


# Degree-5 portrait with the small-sector chord at 0 and the 4-gon hung at 1/4.
def quintic_portrait():
    return CriticalPortrait(
        5,
        frozenset(
            {
                lf(0, "1/5"),
                lf("1/4", "9/20"),
                lf("9/20", "13/20"),
                lf("13/20", "17/20"),
                lf("17/20", "1/4"),
            }
        ),
    )


def diameter_portrait():
    return CriticalPortrait(2, frozenset({lf(0, "1/2")}))


def rabbit_triangle():
    return lam(2, [("1/7", "2/7"), ("2/7", "4/7"), ("4/7", "1/7")])


@lru_cache(maxsize=None)
def quintic_canonical(n):
    return canonical_lamination(FixedPointPortrait(5, ((0, 1),)), n)


@lru_cache(maxsize=None)
def mixed_quartic_state(n):
    F0 = lam(4, [(0, "1/3"), ("7/15", "11/15"), ("13/15", "14/15")])
    C = CriticalPortrait(
        4,
        frozenset({lf(0, "1/4"), lf("1/3", "5/6"), lf("7/15", "43/60")}),
    )
    return pullback(F0, C, n)


@lru_cache(maxsize=None)
def triangle_quartic_state():
    # forward-invariant quadrilateral over the triangle {22/63, 25/63, 37/63}
    F0 = lam(
        4,
        [
            (0, fr(84, 252)),
            (fr(88, 252), fr(100, 252)),
            (fr(100, 252), fr(148, 252)),
            (fr(88, 252), fr(148, 252)),
        ],
    )
    C = CriticalPortrait(
        4,
        frozenset(
            {
                lf(fr(88, 252), fr(151, 252)),
                lf(fr(151, 252), fr(214, 252)),
                lf(fr(88, 252), fr(214, 252)),
                lf(0, fr(63, 252)),
            }
        ),
    )
    return pullback(F0, C, 2)


class TestPortraitValidation:
    def test_non_critical_chord_rejected(self):
        with pytest.raises(ValueError, match="not critical"):
            CriticalPortrait(2, frozenset({lf(0, "1/3")}))

    def test_crossing_chords_rejected(self):
        with pytest.raises(ValueError, match="cross"):
            CriticalPortrait(3, frozenset({lf(0, "1/3"), lf("1/6", "1/2")}))

    def test_criticality_budget_enforced(self):
        with pytest.raises(ValueError, match="criticality 1"):
            CriticalPortrait(3, frozenset({lf(0, "1/3")}))

    def test_budget_accepts_shared_endpoint_paths(self):
        # two chords joined at 0 give criticality 2 without a closed polygon
        C = CriticalPortrait(3, frozenset({lf(0, "1/3"), lf(0, "2/3")}))
        assert C.criticality == 2

    def test_vertex_groups(self):
        C = triangle_quartic_state().portrait
        groups = [tuple(v.value for v in g) for g in C.vertex_groups]
        assert groups == [
            (fr(0), fr(1, 4)),
            (fr(22, 63), fr(151, 252), fr(107, 126)),
        ]
        assert C.criticality == 3

    def test_sorted_chords_deterministic(self):
        C = quintic_portrait()
        assert list(C.sorted_chords) == sorted(C.chords)


class TestCriticalSectors:
    def test_quintic_sector_layout(self):
        secs = critical_sectors(quintic_portrait())
        flags = [S.terminal for S in secs]
        assert flags == [True, False, True, True, True]
        spans = [[(a.start.value, a.end.value) for a in S.arcs] for S in secs]
        assert spans[0] == [(fr(0), fr(1, 5))]
        # the non-terminal sector wraps through 0 on two arcs
        assert spans[1] == [(fr(1, 5), fr(1, 4)), (fr(17, 20), fr(0))]
        assert all(S.arc_total == fr(1, 5) for S in secs)

    def test_diameter_two_sectors(self):
        secs = critical_sectors(diameter_portrait())
        assert len(secs) == 2
        assert all(S.terminal for S in secs)

    def test_cubic_triangle_path(self):
        C = CriticalPortrait(3, frozenset({lf(0, "1/3"), lf(0, "2/3")}))
        secs = critical_sectors(C)
        assert [S.terminal for S in secs] == [True, False, True]
        assert all(S.arc_total == fr(1, 3) for S in secs)

    def test_all_critical_polygon_interior_excluded(self):
        C = triangle_quartic_state().portrait
        secs = critical_sectors(C)
        assert len(secs) == 4
        assert sum(len(S.chords) for S in secs) >= 4


class TestBranchInverse:
    def test_quintic_examples(self):
        S0 = critical_sectors(quintic_portrait())[0]
        assert branch_inverse(S0, angle("1/4")).value == fr(1, 20)

    def test_shared_endpoint_prefers_arc_start(self):
        # both 0 and 1/5 are preimages of 0 on the closed sector boundary
        S0 = critical_sectors(quintic_portrait())[0]
        assert branch_inverse(S0, angle(0)).value == fr(0)

    def test_diameter_examples(self):
        secs = critical_sectors(diameter_portrait())
        assert branch_inverse(secs[0], angle("2/7")).value == fr(1, 7)
        assert branch_inverse(secs[1], angle("2/7")).value == fr(9, 14)

    def test_outside_fiber_rejected(self):
        S0 = critical_sectors(diameter_portrait())[0]
        assert branch_inverse(S0, angle("2/3")).value == fr(1, 3)

    @given(st.integers(1, 124))
    def test_section_of_the_covering(self, k):
        S0 = critical_sectors(quintic_portrait())[0]
        t = angle(fr(k, 625))
        x = branch_inverse(S0, t)
        assert sigma(5, x) == t
        assert S0.contains_point(x)

    @given(st.integers(1, 124), st.integers(1, 124))
    def test_branch_preserves_order(self, j, k):
        S0 = critical_sectors(quintic_portrait())[0]
        xj = branch_inverse(S0, angle(fr(j, 625)))
        xk = branch_inverse(S0, angle(fr(k, 625)))
        if j != k:
            assert (j < k) == (xj.value < xk.value)


class TestPullbackStages:
    def test_quintic_first_stage(self):
        F0 = lam(5, [(0, "1/4")])
        state = pullback(F0, quintic_portrait(), 1)
        assert leaf_set(state.stages[1].leaves) == pairs(
            [
                (0, fr(1, 4)),
                (fr(1, 20), fr(1, 5)),
                (fr(2, 5), fr(9, 20)),
                (fr(3, 5), fr(13, 20)),
                (fr(4, 5), fr(17, 20)),
            ]
        )

    def test_initial_leaf_reused(self):
        # {0, 1/4} is its own preimage and survives into every stage
        F0 = lam(5, [(0, "1/4")])
        state = pullback(F0, quintic_portrait(), 2)
        target = lf(0, "1/4")
        assert all(target in L.leaves for L in state.stages)

    def test_rabbit_sibling_triangle(self):
        C = CriticalPortrait(2, frozenset({lf("1/14", "4/7")}))
        state = pullback(rabbit_triangle(), C, 1)
        new = state.stages[1].leaves - state.stages[0].leaves
        assert leaf_set(new) == pairs(
            [
                (fr(1, 14), fr(9, 14)),
                (fr(1, 14), fr(11, 14)),
                (fr(9, 14), fr(11, 14)),
            ]
        )

    def test_zero_stages(self):
        F0 = lam(5, [(0, "1/4")])
        state = pullback(F0, quintic_portrait(), 0)
        assert state.depth == 0
        assert state.stages == (F0,)
        assert state.final == F0

    def test_stages_nest(self):
        state = quintic_canonical(3)
        for prev, nxt in zip(state.stages, state.stages[1:]):
            assert prev.leaves <= nxt.leaves

    def test_frontier_sizes(self):
        state = quintic_canonical(2)
        assert [len(state.frontier(k)) for k in range(3)] == [1, 5, 25]

    def test_second_stage_members(self):
        state = quintic_canonical(2)
        expected = pairs(
            [
                (0, fr(1, 100)),
                (fr(1, 5), fr(21, 100)),
                (fr(2, 5), fr(41, 100)),
                (fr(3, 5), fr(61, 100)),
                (fr(4, 5), fr(81, 100)),
                (fr(1, 25), fr(1, 20)),
                (fr(6, 25), fr(1, 4)),
                (fr(11, 25), fr(9, 20)),
                (fr(16, 25), fr(13, 20)),
                (fr(21, 25), fr(17, 20)),
                (fr(2, 25), fr(9, 100)),
                (fr(7, 25), fr(29, 100)),
                (fr(12, 25), fr(49, 100)),
                (fr(17, 25), fr(69, 100)),
                (fr(22, 25), fr(89, 100)),
                (fr(3, 25), fr(13, 100)),
                (fr(8, 25), fr(33, 100)),
                (fr(13, 25), fr(53, 100)),
                (fr(18, 25), fr(73, 100)),
                (fr(23, 25), fr(93, 100)),
                (fr(4, 25), fr(17, 100)),
                (fr(9, 25), fr(37, 100)),
                (fr(14, 25), fr(57, 100)),
                (fr(19, 25), fr(77, 100)),
                (fr(24, 25), fr(97, 100)),
            ]
        )
        assert leaf_set(state.frontier(2)) == expected

    def test_non_invariant_initial_set_rejected(self):
        F0 = lam(2, [("1/7", "2/7")])
        with pytest.raises(ValueError, match="outside the initial set"):
            pullback(F0, diameter_portrait(), 1)

    def test_portrait_crossing_initial_set_rejected(self):
        F0 = lam(2, [("1/8", "3/8")])
        C = CriticalPortrait(2, frozenset({lf("1/4", "3/4")}))
        with pytest.raises(ValueError, match="crosses initial leaf"):
            pullback(F0, C, 1)

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError, match="unknown policy"):
            pullback(lam(2, []), diameter_portrait(), 1, policy="fastest")

    def test_negative_stage_count_rejected(self):
        with pytest.raises(ValueError, match=">= 0"):
            pullback(lam(2, []), diameter_portrait(), -1)

    def test_degree_mismatch_rejected(self):
        with pytest.raises(ValueError, match="degree mismatch"):
            pullback(lam(3, []), diameter_portrait(), 1)


class TestPortraitChoiceIndependence:
    def test_quintic_choices_agree(self):
        report = cp_pullback_equality(FixedPointPortrait(5, ((0, 1),)), 1)
        assert report.equal
        assert report.choice_count == 8
        assert report.mismatches == ()

    def test_cubic_choices_agree(self):
        report = cp_pullback_equality(FixedPointPortrait(3, ((0, 1),)), 3)
        assert report.equal
        assert report.choice_count == 4

    def test_empty_quadratic(self):
        report = cp_pullback_equality(FixedPointPortrait(2, ()), 2)
        assert report.equal
        assert report.choice_count == 1


class TestCanonicalConstruction:
    def test_quintic_first_stage(self):
        state = quintic_canonical(1)
        assert leaf_set(state.stages[1].leaves) == pairs(
            [
                (0, fr(1, 4)),
                (0, fr(1, 20)),
                (fr(1, 5), fr(1, 4)),
                (fr(2, 5), fr(9, 20)),
                (fr(3, 5), fr(13, 20)),
                (fr(4, 5), fr(17, 20)),
            ]
        )

    def test_quintic_portrait_choice(self):
        # every placed polygon hangs at the joined fixed point 0
        C = quintic_canonical(1).portrait
        assert leaf_set(C.chords) == pairs(
            [
                (0, fr(1, 5)),
                (0, fr(2, 5)),
                (0, fr(4, 5)),
                (fr(2, 5), fr(3, 5)),
                (fr(3, 5), fr(4, 5)),
            ]
        )

    def test_cubic_first_stage(self):
        state = canonical_lamination(FixedPointPortrait(3, ((0, 1),)), 1)
        assert leaf_set(state.stages[1].leaves) == pairs(
            [(0, fr(1, 2)), (0, fr(1, 6)), (fr(1, 3), fr(1, 2)), (fr(2, 3), fr(5, 6))]
        )
        assert leaf_set(state.portrait.chords) == pairs([(0, fr(1, 3)), (0, fr(2, 3))])

    def test_empty_portrait_stays_empty(self):
        state = canonical_lamination(FixedPointPortrait(2, ()), 3)
        assert all(not L.leaves for L in state.stages)
        assert leaf_set(state.portrait.chords) == pairs([(0, fr(1, 2))])

    def test_policy_recorded(self):
        state = quintic_canonical(1)
        assert state.policy == "shortest"
        assert state.fpp == FixedPointPortrait(5, ((0, 1),))


class TestStageDiagnostics:
    def test_quintic_report_clean(self):
        report = clp_checks(quintic_canonical(3))
        assert report.ok
        assert report.escape_failures == ()
        assert report.length_failures == ()

    def test_quintic_stage_lengths(self):
        report = clp_checks(quintic_canonical(3))
        assert report.max_new_length == (fr(1, 20), fr(1, 100), fr(1, 500))
        for k, longest in enumerate(report.max_new_length, start=1):
            assert longest <= fr(1, 2 * 5**k)

    def test_quintic_sector_gaps(self):
        report = clp_checks(quintic_canonical(3))
        facts = [(sr.gap_depth, sr.vertex_count, sr.unresolved) for sr in report.sector_reports]
        # the small sector resolves at stage 1; the big one refines all the way down
        assert facts == [(1, 4, ()), (3, 128, ())]
        assert all(sr.ok for sr in report.sector_reports)

    def test_cubic_report_clean(self):
        report = clp_checks(canonical_lamination(FixedPointPortrait(3, ((0, 1),)), 2))
        assert report.ok


class TestInvariantGap:
    def test_small_sector_gap(self):
        state = quintic_canonical(3)
        small = fixed_sectors(state.fpp)[0]
        face = invariant_gap(state, small)
        assert {v.value for v in face.vertices} == {fr(0), fr(1, 20), fr(1, 5), fr(1, 4)}

    def test_big_sector_gap(self):
        state = quintic_canonical(3)
        big = fixed_sectors(state.fpp)[1]
        face = invariant_gap(state, big)
        assert len(face.vertices) == 128
        for t in (0, "2/5", "3/5", "4/5"):
            assert face.on_closure(angle(t))

    def test_gap_vertices_forward_invariant(self):
        state = quintic_canonical(3)
        for S in fixed_sectors(state.fpp):
            verts = {v.value for v in invariant_gap(state, S).vertices}
            assert {sigma(5, angle(v)).value for v in verts} <= verts

    def test_empty_lamination_whole_disk(self):
        state = canonical_lamination(FixedPointPortrait(2, ()), 2)
        face = invariant_gap(state, fixed_sectors(state.fpp)[0])
        assert face.vertices == ()
        assert len(face.arcs) == 1


class TestStageInvariance:
    def test_canonical_stages_invariant(self):
        state = quintic_canonical(2)
        for prev, nxt in zip(state.stages, state.stages[1:]):
            assert check_invariance(prev, nxt) == ()

    def test_rabbit_stages_invariant(self):
        C = CriticalPortrait(2, frozenset({lf("1/14", "4/7")}))
        state = pullback(rabbit_triangle(), C, 2)
        for prev, nxt in zip(state.stages, state.stages[1:]):
            assert check_invariance(prev, nxt) == ()


class TestHyperbolicityCheck:
    def test_canonical_states_pass(self):
        st5 = quintic_canonical(2)
        assert is_hyperbolic_approx(st5.final, st5.portrait, 2)
        st3 = canonical_lamination(FixedPointPortrait(3, ((0, 1),)), 2)
        assert is_hyperbolic_approx(st3.final, st3.portrait, 2)

    def test_portrait_chord_as_leaf_fails(self):
        L = lam(2, [(0, "1/2")])
        assert not is_hyperbolic_approx(L, diameter_portrait(), 2)

    def test_empty_lamination_passes(self):
        assert is_hyperbolic_approx(lam(2, []), diameter_portrait(), 2)


class TestSectorClassification:
    def test_no_object_subtended(self):
        P = FixedPointPortrait(5, ((0, 1), (2, 3)))
        state = canonical_lamination(P, 1)
        central = fixed_sectors(P)[1]
        c = classify_sector(state.final, state.portrait, central)
        assert (c.case, c.witness_type, c.rotation) == (1, 1, None)
        assert [o.subtended for o in c.objects] == [False, False]
        assert {v.value for v in c.witness.vertices} == {
            fr(0), fr(1, 4), fr(3, 10), fr(7, 20), fr(2, 5), fr(9, 20),
            fr(1, 2), fr(3, 4), fr(4, 5), fr(17, 20), fr(9, 10), fr(19, 20),
        }

    def test_joined_sector_keeps_gap(self):
        state = triangle_quartic_state()
        P = FixedPointPortrait(4, ((0, 1),))
        c = classify_sector(state.final, state.portrait, fixed_sectors(P)[0])
        assert (c.case, c.witness_type) == (1, 1)
        assert {v.value for v in c.witness.vertices} == {
            fr(0), fr(1, 48), fr(1, 16), fr(1, 12),
            fr(1, 4), fr(13, 48), fr(5, 16), fr(1, 3),
        }

    def test_all_objects_subtended(self):
        state = triangle_quartic_state()
        P = FixedPointPortrait(4, ((0, 1),))
        c = classify_sector(state.final, state.portrait, fixed_sectors(P)[1])
        assert (c.case, c.witness_type) == (2, 2)
        assert c.rotation == fr(1, 3)
        assert [o.subtended for o in c.objects] == [True, True]
        assert {v.value for v in c.witness.vertices} == {fr(22, 63), fr(25, 63), fr(37, 63)}

    def test_mixed_subtending(self):
        state = mixed_quartic_state(2)
        S = fixed_sectors(FixedPointPortrait(4, ()))[0]
        c = classify_sector(state.final, state.portrait, S)
        assert (c.case, c.witness_type, c.rotation) == (3, 1, None)
        assert [o.subtended for o in c.objects] == [False, False, True]
        assert sorted(v.value * 240 for v in c.witness.vertices) == [
            0, 80, 82, 86, 88, 104, 105, 110, 112, 176, 178, 179,
            180, 200, 202, 206, 208, 224, 225, 230, 232, 236, 238, 239,
        ]

    def test_witness_vertices_forward_invariant(self):
        state = mixed_quartic_state(2)
        S = fixed_sectors(FixedPointPortrait(4, ()))[0]
        c = classify_sector(state.final, state.portrait, S)
        verts = {v.value for v in c.witness.vertices}
        assert {sigma(4, angle(v)).value for v in verts} <= verts

    def test_depth_zero_insufficient(self):
        state = mixed_quartic_state(0)
        S = fixed_sectors(FixedPointPortrait(4, ()))[0]
        with pytest.raises(InsufficientDepthError):
            classify_sector(state.final, state.portrait, S)


class TestFlowerLike:
    def test_quintic_leaf_center(self):
        state = quintic_canonical(3)
        flower = flower_like(state.final, lf(0, "1/4"))
        assert flower.petal_count == 2
        assert {v.value for v in flower.center_vertices} == {fr(0), fr(1, 4)}
        assert sorted(len(f.vertices) for f in flower.attached) == [34, 128]

    def test_rabbit_triangle_center(self):
        C = CriticalPortrait(2, frozenset({lf("1/14", "4/7")}))
        state = pullback(rabbit_triangle(), C, 2)
        tri = Polygon((angle("1/7"), angle("2/7"), angle("4/7")))
        flower = flower_like(state.final, tri)
        assert flower.petal_count == 2
        petal_sets = {frozenset(v.value for v in f.vertices) for f in flower.attached}
        assert petal_sets == {
            frozenset({fr(1, 14), fr(1, 7), fr(4, 7), fr(9, 14)}),
            frozenset({fr(1, 7), fr(2, 7)}),
        }


class TestPreimageConsistency:
    @given(st.integers(2, 6), st.integers(0, 200))
    def test_fibers_have_degree_many_points(self, d, k):
        t = angle(fr(k, 201))
        fiber = preimages(d, t)
        assert len(fiber) == d
        assert all(sigma(d, x) == t for x in fiber)

    def test_stage_one_additions_map_onto_initial_leaf(self):
        # every first-stage chord of the quintic example covers the seed leaf
        state = quintic_canonical(1)
        seed = lf(0, "1/4")
        for l in state.frontier(1):
            assert leaf_image(5, l) == seed
