"""Exact arithmetic on the circle R/Z and the angle d-tupling map.

Angles are rational numbers modulo 1, kept as `fractions.Fraction` so every
comparison and every dynamical computation below is exact.  The map of
interest is t -> d*t (mod 1) for an integer degree d >= 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "CirclePoint",
    "DnaryString",
    "angle",
    "ccw_span",
    "check_degree",
    "fixed_points",
    "in_arc",
    "orbit",
    "parse_angle",
    "parse_dnary",
    "preimages",
    "render_dnary",
    "sigma",
]

_DIGITS = "0123456789"


def check_degree(d: int) -> int:
    """Validate an integer degree d >= 2 and return it."""
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"degree must be an integer >= 2, got {d!r}")
    return d


@dataclass(frozen=True, order=True)
class CirclePoint:
    """A point of R/Z, stored as a reduced fraction in [0, 1)."""

    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __add__(self, other: CirclePoint | Fraction | int) -> CirclePoint:
        return CirclePoint(self.value + _raw(other))

    def __sub__(self, other: CirclePoint | Fraction | int) -> CirclePoint:
        return CirclePoint(self.value - _raw(other))

    def __mul__(self, k: int | Fraction) -> CirclePoint:
        return CirclePoint(self.value * k)

    __rmul__ = __mul__

    def distance(self, other: CirclePoint) -> Fraction:
        """Shortest arc distance between two points, in [0, 1/2]."""
        gap = (self.value - _raw(other)) % 1
        return min(gap, 1 - gap)

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return str(self.value)


def _raw(x: CirclePoint | Fraction | int) -> Fraction:
    return x.value if isinstance(x, CirclePoint) else Fraction(x)


def angle(x: CirclePoint | Fraction | int | str) -> CirclePoint:
    """Coerce a fraction-like value ("3/7", Fraction, int, CirclePoint) to a CirclePoint."""
    if isinstance(x, CirclePoint):
        return x
    return CirclePoint(Fraction(x))


def ccw_span(a: CirclePoint, b: CirclePoint) -> Fraction:
    """Length of the counterclockwise arc from a to b, in [0, 1)."""
    return (_raw(b) - _raw(a)) % 1


def sigma(d: int, t: CirclePoint) -> CirclePoint:
    """Apply the angle d-tupling map t -> d*t mod 1."""
    check_degree(d)
    return CirclePoint(_raw(t) * d)


def preimages(d: int, t: CirclePoint) -> list[CirclePoint]:
    """The d preimages (t + i)/d, i = 0..d-1, in increasing circular order."""
    check_degree(d)
    v = _raw(t)
    return [CirclePoint((v + i) / d) for i in range(d)]


def fixed_points(d: int) -> list[CirclePoint]:
    """The d-1 fixed points i/(d-1) of the d-tupling map, sorted."""
    check_degree(d)
    return [CirclePoint(Fraction(i, d - 1)) for i in range(d - 1)]


def in_arc(t: CirclePoint, a: CirclePoint, b: CirclePoint) -> bool:
    """Whether t lies strictly inside the open arc running counterclockwise from a to b."""
    if a == b:
        raise ValueError("arc endpoints must be distinct")
    rel_t = (_raw(t) - _raw(a)) % 1
    rel_b = (_raw(b) - _raw(a)) % 1
    return 0 < rel_t < rel_b


def orbit(d: int, t: CirclePoint) -> tuple[int, list[CirclePoint]]:
    """Forward orbit of t: (preperiod length, periodic cycle in orbit order).

    Rational angles are eventually periodic under the d-tupling map, so the
    iteration always terminates at the first repeated point.
    """
    check_degree(d)
    seen: dict[CirclePoint, int] = {}
    seq: list[CirclePoint] = []
    x = angle(t)
    while x not in seen:
        seen[x] = len(seq)
        seq.append(x)
        x = sigma(d, x)
    start = seen[x]
    return start, seq[start:]


@dataclass(frozen=True)
class DnaryString:
    """A base-d digit expansion `preperiod _ period` of a rational angle."""

    base: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 2 <= self.base <= 10:
            raise ValueError("digit strings are supported for bases 2..10 only")
        if not self.period:
            raise ValueError("the periodic part must be nonempty")
        for digit in self.preperiod + self.period:
            if not 0 <= digit < self.base:
                raise ValueError(f"digit {digit} out of range for base {self.base}")

    def __str__(self) -> str:
        pre = "".join(_DIGITS[digit] for digit in self.preperiod)
        per = "".join(_DIGITS[digit] for digit in self.period)
        return f"{pre}_{per}"


def parse_dnary(s: str, d: int) -> CirclePoint:
    """Parse `digits _ digits` as a base-d expansion with repeating tail."""
    check_degree(d)
    if d > 10:
        raise ValueError("base-d strings are limited to d <= 10; use a p/q rational")
    if s.count("_") != 1:
        raise ValueError(f"malformed digit string {s!r}: expected one '_'")
    pre_s, per_s = s.split("_")
    if not per_s:
        raise ValueError(f"malformed digit string {s!r}: empty periodic part")
    for ch in pre_s + per_s:
        if ch not in _DIGITS or int(ch) >= d:
            raise ValueError(f"invalid base-{d} digit {ch!r} in {s!r}")
    m, k = len(pre_s), len(per_s)
    # Horner loop: int(s, d) refuses very long strings, exact periods need them
    head = tail = 0
    for ch in pre_s:
        head = head * d + int(ch)
    for ch in per_s:
        tail = tail * d + int(ch)
    return CirclePoint(Fraction(head, d**m) + Fraction(tail, d**m * (d**k - 1)))


def render_dnary(t: CirclePoint, d: int) -> DnaryString:
    """Base-d expansion of t with minimal preperiod and minimal period.

    Runs the digit recursion x -> d*x mod 1, tracking exact remainders; the
    first repeated remainder pins down both minimal lengths at once.  An
    all-(d-1) repeating tail can never appear because remainders are exact.
    """
    check_degree(d)
    if d > 10:
        raise ValueError("base-d strings are limited to d <= 10; use a p/q rational")
    x = angle(t).value
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    while x not in seen:
        seen[x] = len(digits)
        scaled = x * d
        digit = int(scaled)
        digits.append(digit)
        x = scaled - digit
    start = seen[x]
    return DnaryString(d, tuple(digits[:start]), tuple(digits[start:]))


def parse_angle(text: str, d: int | None = None) -> CirclePoint:
    """Parse an angle literal: either a rational `p/q` or a digit string `pre_per`."""
    text = text.strip()
    if "_" in text:
        if d is None:
            raise ValueError("a degree is required to parse a digit-string angle")
        return parse_dnary(text, d)
    try:
        return CirclePoint(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed angle literal {text!r}") from exc
