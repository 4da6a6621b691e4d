"""Exact piecewise-linear homeomorphisms of [0, 1] with dyadic data.

Elements are orientation-preserving PL maps whose breakpoints are dyadic
rationals and whose slopes are powers of two; they form Thompson's group F
under composition.  Every computation here is exact integer arithmetic;
floating point is deliberately absent, because the separation certificates
built on top of this module must be replayable bit for bit.

The text form of a dyadic is "p/2^e", e.g. "3/2^3" for 3/8.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CapError,
    EndpointError,
    MonotonicityError,
    ParseError,
    RangeError,
    SlopeError,
)


@dataclass(frozen=True, order=False)
class Dyadic:
    """numerator / 2^exponent, normalized so the numerator is odd (or 0/2^0)."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise RangeError(f"exponent must be >= 0, got {self.exponent}")
        if self.numerator == 0:
            if self.exponent != 0:
                raise ParseError("zero must be written 0/2^0")
        elif self.numerator % 2 == 0:
            raise ParseError(f"{self.numerator}/2^{self.exponent} is not normalized")

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self})"

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dyadic) and (self.numerator, self.exponent) == (
            other.numerator,
            other.exponent,
        )

    def __hash__(self) -> int:
        return hash((self.numerator, self.exponent))

    def _cmp_key(self, other: "Dyadic") -> tuple[int, int]:
        e = max(self.exponent, other.exponent)
        return (
            self.numerator << (e - self.exponent),
            other.numerator << (e - other.exponent),
        )

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exponent, other.exponent)
        num = (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent))
        return make_dyadic(num, e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exponent, other.exponent)
        num = (self.numerator << (e - self.exponent)) - (other.numerator << (e - other.exponent))
        return make_dyadic(num, e)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return make_dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    def __neg__(self) -> "Dyadic":
        return make_dyadic(-self.numerator, self.exponent)

    def shift(self, z: int) -> "Dyadic":
        """Multiply by 2^z."""
        if self.numerator == 0:
            return ZERO
        if z >= self.exponent:
            return make_dyadic(self.numerator << (z - self.exponent), 0)
        return make_dyadic(self.numerator, self.exponent - z)


def make_dyadic(numerator: int, exponent: int) -> Dyadic:
    """Normalize numerator/2^exponent."""
    if exponent < 0:
        numerator <<= -exponent
        exponent = 0
    if numerator == 0:
        return Dyadic(0, 0)
    while numerator % 2 == 0 and exponent > 0:
        numerator //= 2
        exponent -= 1
    return Dyadic(numerator, exponent)


ZERO = Dyadic(0, 0)
ONE = Dyadic(1, 0)
HALF = Dyadic(1, 1)

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*2\^(\d+)\s*)?$")


def parse_dyadic(text: str) -> Dyadic:
    """Parse "p/2^e" (or a bare integer)."""
    m = _DYADIC_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse dyadic {text!r}; expected p/2^e")
    return make_dyadic(int(m.group(1)), int(m.group(2) or 0))


def as_dyadic(value) -> Dyadic:
    """Coerce ints, Fractions with power-of-two denominator, and strings."""
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return make_dyadic(value, 0)
    if isinstance(value, str):
        return parse_dyadic(value)
    if isinstance(value, Fraction):
        den = value.denominator
        e = den.bit_length() - 1
        if 1 << e != den:
            raise ParseError(f"{value} is not dyadic")
        return make_dyadic(value.numerator, e)
    raise ParseError(f"cannot interpret {value!r} as a dyadic")


def _slope_exponent(x0: Dyadic, y0: Dyadic, x1: Dyadic, y1: Dyadic) -> int:
    """The z with (y1 - y0) = 2^z (x1 - x0); SlopeError otherwise."""
    dy = y1 - y0
    dx = x1 - x0
    if dy.numerator <= 0 or dx.numerator <= 0:
        raise MonotonicityError("breakpoints must strictly increase in both coordinates")
    if dy.numerator != dx.numerator:
        raise SlopeError(f"segment from {x0} has slope {Fraction(dy.as_fraction() / dx.as_fraction())}, not a power of two")
    return dx.exponent - dy.exponent


@dataclass(frozen=True)
class DyadicPLMap:
    """An element of Thompson's F, as its minimal breakpoint list."""

    breakpoints: tuple[tuple[Dyadic, Dyadic], ...]

    def is_identity(self) -> bool:
        return self.breakpoints == ((ZERO, ZERO), (ONE, ONE))

    def __str__(self) -> str:
        return " ".join(f"({x},{y})" for x, y in self.breakpoints)


def make_plmap(breakpoints: Iterable[Sequence]) -> DyadicPLMap:
    """Validate and canonicalize a breakpoint list.

    Requires endpoints (0,0) and (1,1), strictly increasing coordinates and
    power-of-two slopes; consecutive collinear breakpoints are dropped so a
    map has exactly one representation.
    """
    pts = [(as_dyadic(x), as_dyadic(y)) for x, y in breakpoints]
    if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
        raise EndpointError("breakpoints must run from (0,0) to (1,1)")
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if not (x0 < x1 and y0 < y1):
            raise MonotonicityError("breakpoints must strictly increase in both coordinates")
    slopes = [_slope_exponent(x0, y0, x1, y1) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]
    keep = [pts[0]]
    for i in range(1, len(pts) - 1):
        if slopes[i - 1] != slopes[i]:
            keep.append(pts[i])
    keep.append(pts[-1])
    for x, y in keep:
        if not (ZERO <= x <= ONE and ZERO <= y <= ONE):
            raise RangeError("breakpoints must lie in [0,1]")
    return DyadicPLMap(tuple(keep))


def identity_map() -> DyadicPLMap:
    return DyadicPLMap(((ZERO, ZERO), (ONE, ONE)))


def eval_dyadic(f: DyadicPLMap, t: Dyadic) -> Dyadic:
    """Exact image of a dyadic point."""
    if not ZERO <= t <= ONE:
        raise RangeError(f"{t} lies outside [0,1]")
    pts = f.breakpoints
    lo, hi = 0, len(pts) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pts[mid][0] <= t:
            lo = mid
        else:
            hi = mid
    x0, y0 = pts[lo]
    if t == x0:
        return y0
    x1, y1 = pts[hi]
    z = _slope_exponent(x0, y0, x1, y1)
    return y0 + (t - x0).shift(z)


def _preimage(f: DyadicPLMap, u: Dyadic) -> Dyadic:
    """Exact f^{-1}(u); divides only by powers of two, so stays dyadic."""
    pts = f.breakpoints
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 <= u <= y1:
            z = _slope_exponent(x0, y0, x1, y1)
            return x0 + (u - y0).shift(-z)
    raise RangeError(f"{u} outside the range of the map")


def compose_pl(f: DyadicPLMap, g: DyadicPLMap) -> DyadicPLMap:
    """The map t -> g(f(t)): apply f, then g."""
    xs = {x for x, _ in f.breakpoints}
    xs.update(_preimage(f, u) for u, _ in g.breakpoints)
    pts = sorted(xs)
    return make_plmap([(x, eval_dyadic(g, eval_dyadic(f, x))) for x in pts])


def inverse_pl(f: DyadicPLMap) -> DyadicPLMap:
    return make_plmap([(y, x) for x, y in f.breakpoints])


def standard_generators() -> tuple[DyadicPLMap, DyadicPLMap]:
    """The classical pair: x0 with breaks at 1/2, 3/4; x1 = x0 squeezed into [1/2, 1]."""
    x0 = make_plmap([(ZERO, ZERO), (HALF, Dyadic(1, 2)), (Dyadic(3, 2), HALF), (ONE, ONE)])
    x1 = make_plmap(
        [
            (ZERO, ZERO),
            (HALF, HALF),
            (Dyadic(3, 2), Dyadic(5, 3)),
            (Dyadic(7, 3), Dyadic(3, 2)),
            (ONE, ONE),
        ]
    )
    return x0, x1


def _rescale(f: DyadicPLMap, d1: Dyadic, d2: Dyadic) -> DyadicPLMap:
    """Conjugate f into [d1, d2], identity outside."""
    width = d2 - d1
    inner = [(d1 + width * x, d1 + width * y) for x, y in f.breakpoints]
    pts = []
    if d1 > ZERO:
        pts.append((ZERO, ZERO))
    pts.extend(inner)
    if d2 < ONE:
        pts.append((ONE, ONE))
    return make_plmap(pts)


def power_pl(f: DyadicPLMap, n: int) -> DyadicPLMap:
    if n < 0:
        return power_pl(inverse_pl(f), -n)
    out = identity_map()
    for _ in range(n):
        out = compose_pl(out, f)
    return out


def interval_mover(
    d1: Dyadic,
    d2: Dyadic,
    x: Dyadic,
    forbidden: Iterable[Dyadic] = (),
    cap: int = 64,
) -> DyadicPLMap:
    """An element supported in [d1, d2] moving x off the forbidden set.

    Tries powers of the first standard generator rescaled into [d1, d2], in
    the fixed order n = 1, -1, 2, -2, ...; the orbit of an interior point is
    infinite, so some power always succeeds.  The cap is a defensive bound.
    """
    d1, d2, x = as_dyadic(d1), as_dyadic(d2), as_dyadic(x)
    if not (ZERO < d1 < x < d2 < ONE):
        raise RangeError("need 0 < d1 < x < d2 < 1")
    forbidden = set(forbidden)
    x0, _ = standard_generators()
    for k in range(1, cap + 1):
        for n in (k, -k):
            candidate = _rescale(power_pl(x0, n), d1, d2)
            image = eval_dyadic(candidate, x)
            if image != x and image not in forbidden:
                return candidate
    raise CapError(f"no power of the generator up to {cap} moved {x} clear of {len(forbidden)} forbidden points")


def support_bounds(f: DyadicPLMap) -> tuple[Dyadic, Dyadic] | None:
    """Smallest closed interval outside which f is the identity; None if empty."""
    pts = f.breakpoints
    if f.is_identity():
        return None
    lo = 0
    while pts[lo + 1][0] == pts[lo + 1][1] and _slope_exponent(*pts[lo], *pts[lo + 1]) == 0:
        lo += 1
    hi = len(pts) - 1
    while pts[hi - 1][0] == pts[hi - 1][1] and _slope_exponent(*pts[hi - 1], *pts[hi]) == 0:
        hi -= 1
    return pts[lo][0], pts[hi][0]


def plmap_to_json(f: DyadicPLMap) -> dict:
    return {"breakpoints": [[str(x), str(y)] for x, y in f.breakpoints]}


def plmap_from_json(blob) -> DyadicPLMap:
    return make_plmap([(parse_dyadic(x), parse_dyadic(y)) for x, y in blob["breakpoints"]])
