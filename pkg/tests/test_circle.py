from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lamlab.circle import (
    CirclePoint,
    angle,
    ccw_span,
    fixed_points,
    in_arc,
    orbit,
    parse_angle,
    parse_dnary,
    preimages,
    render_dnary,
    sigma,
)

F = Fraction


def fr(p, q=1):
    return CirclePoint(F(p, q))


angles = st.fractions(min_value=0, max_value=1, max_denominator=10**4).map(CirclePoint)
degrees = st.integers(min_value=2, max_value=9)


class TestCirclePoint:
    def test_normalizes_mod_one(self):
        assert fr(5, 4) == fr(1, 4)
        assert fr(-1, 4) == fr(3, 4)
        assert CirclePoint(F(7)) == fr(0)

    def test_arithmetic(self):
        assert fr(3, 4) + fr(1, 2) == fr(1, 4)
        assert fr(1, 4) - fr(1, 2) == fr(3, 4)
        assert 3 * fr(1, 7) == fr(3, 7)

    def test_distance_is_shortest_arc(self):
        assert fr(0).distance(fr(3, 4)) == F(1, 4)
        assert fr(1, 8).distance(fr(5, 8)) == F(1, 2)

    def test_ordering_is_by_representative(self):
        assert fr(1, 8) < fr(7, 8)
        assert sorted([fr(3, 4), fr(0), fr(1, 2)]) == [fr(0), fr(1, 2), fr(3, 4)]


class TestSigma:
    def test_examples(self):
        assert sigma(2, fr(1, 7)) == fr(2, 7)
        assert sigma(3, fr(0)) == fr(0)
        assert sigma(5, fr(3, 4)) == fr(3, 4)

    def test_rejects_bad_degree(self):
        with pytest.raises(ValueError):
            sigma(1, fr(1, 2))

    @given(degrees, angles)
    def test_preimages_map_forward(self, d, t):
        pres = preimages(d, t)
        assert len(pres) == d
        assert len(set(pres)) == d
        assert pres == sorted(pres)
        for p in pres:
            assert sigma(d, p) == t


class TestPreimages:
    def test_examples(self):
        assert preimages(2, fr(0)) == [fr(0), fr(1, 2)]
        assert preimages(2, fr(2, 7)) == [fr(1, 7), fr(9, 14)]
        assert preimages(5, fr(1, 4)) == [
            fr(1, 20),
            fr(1, 4),
            fr(9, 20),
            fr(13, 20),
            fr(17, 20),
        ]


class TestFixedPoints:
    def test_examples(self):
        assert fixed_points(2) == [fr(0)]
        assert fixed_points(3) == [fr(0), fr(1, 2)]
        assert fixed_points(5) == [fr(0), fr(1, 4), fr(1, 2), fr(3, 4)]

    @given(degrees)
    def test_fixed_under_sigma(self, d):
        for p in fixed_points(d):
            assert sigma(d, p) == p


class TestInArc:
    def test_examples(self):
        assert in_arc(fr(1, 4), fr(0), fr(1, 2))
        assert not in_arc(fr(3, 4), fr(0), fr(1, 2))
        # wrapping arc
        assert in_arc(fr(0), fr(3, 4), fr(1, 4))

    def test_endpoints_excluded(self):
        assert not in_arc(fr(0), fr(0), fr(1, 2))
        assert not in_arc(fr(1, 2), fr(0), fr(1, 2))

    def test_degenerate_arc_rejected(self):
        with pytest.raises(ValueError):
            in_arc(fr(1, 4), fr(1, 3), fr(1, 3))

    @given(angles, angles, angles)
    def test_trichotomy(self, t, a, b):
        # t lies in exactly one of: the arc a->b, the arc b->a, {a, b}
        if a == b:
            return
        cases = [in_arc(t, a, b), in_arc(t, b, a), t in (a, b)]
        assert cases.count(True) == 1


class TestOrbit:
    def test_periodic_orbit(self):
        assert orbit(2, fr(1, 7)) == (0, [fr(1, 7), fr(2, 7), fr(4, 7)])

    def test_preperiodic_orbit(self):
        assert orbit(2, fr(1, 2)) == (1, [fr(0)])

    def test_two_cycle(self):
        assert orbit(3, fr(1, 8)) == (0, [fr(1, 8), fr(3, 8)])

    @given(degrees, angles)
    def test_matches_brute_force(self, d, t):
        pre, cyc = orbit(d, t)
        x = angle(t)
        for _ in range(pre):
            x = sigma(d, x)
        # x now sits on the cycle and the cycle closes up
        assert x == cyc[0]
        for i, c in enumerate(cyc):
            assert sigma(d, c) == cyc[(i + 1) % len(cyc)]
        # minimality of the preperiod: entering one step earlier is off-cycle
        if pre > 0:
            y = angle(t)
            for _ in range(pre - 1):
                y = sigma(d, y)
            assert y not in cyc


class TestDnary:
    def test_parse_examples(self):
        assert parse_dnary("_001", 2) == fr(1, 7)
        assert parse_dnary("_0", 5) == fr(0)
        assert parse_dnary("1_3", 4) == fr(1, 2)

    def test_render_examples(self):
        assert str(render_dnary(fr(1, 7), 2)) == "_001"
        assert str(render_dnary(fr(0), 5)) == "_0"
        assert str(render_dnary(fr(1, 2), 2)) == "1_0"

    def test_parse_rejects_garbage(self):
        for bad in ["", "12", "_", "1_", "_2", "1_2_3", " _1", "_1 ", "-1_0"]:
            with pytest.raises(ValueError):
                parse_dnary(bad, 2)

    def test_parse_rejects_large_base(self):
        with pytest.raises(ValueError):
            parse_dnary("_1", 11)

    @given(degrees, angles)
    def test_round_trip(self, d, t):
        s = render_dnary(t, d)
        assert s.base == d
        assert parse_dnary(str(s), d) == t

    @given(degrees, angles)
    def test_minimality(self, d, t):
        s = render_dnary(t, d)
        k = len(s.period)
        # no shorter period divides the tail
        for j in range(1, k):
            if k % j == 0:
                assert s.period != s.period[:j] * (k // j)
        # the preperiod cannot be shortened: its last digit differs from the
        # digit the cycle would supply in its place
        if s.preperiod:
            assert s.preperiod[-1] != s.period[-1]


class TestParseAngle:
    def test_rational(self):
        assert parse_angle("3/7") == fr(3, 7)
        assert parse_angle("0") == fr(0)
        assert parse_angle(" 5/4 ") == fr(1, 4)

    def test_digit_string(self):
        assert parse_angle("_001", 2) == fr(1, 7)

    def test_digit_string_needs_degree(self):
        with pytest.raises(ValueError):
            parse_angle("_001")

    def test_malformed(self):
        for bad in ["", "a/b", "1/0", "one"]:
            with pytest.raises(ValueError):
                parse_angle(bad)


@given(angles, angles)
def test_ccw_span_antisymmetry(a, b):
    if a == b:
        assert ccw_span(a, b) == 0
    else:
        assert ccw_span(a, b) + ccw_span(b, a) == 1
