"""Exact arithmetic over Q(sqrt 3) and the planar predicates built on it.

Every coordinate, squared distance and ratio in the simulator is a
:class:`FieldScalar` ``a + b*sqrt(3)`` with rational ``a`` and ``b``.  Since
sqrt(3) is irrational, equality and sign are decidable without rounding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq

Rational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, str):
        text = value.strip()
        if not _RAT_RE.fullmatch(text):
            raise ValueError(f"not an exact rational: {value!r}")
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den) if den else 1)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)) or type(value) is type(_ZERO):
        return mpq(value)
    if isinstance(value, type(gmpy2.mpz(0))):
        return mpq(value)
    if isinstance(value, FieldScalar):
        if value.b:
            raise ValueError(f"{value} is not rational")
        return value.a
    raise TypeError(f"cannot make an exact rational from {type(value).__name__}")


_RAT_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_SCALAR_RE = re.compile(
    r"(?P<a>[+-]?\d+(?:/\d+)?)?"
    r"(?:(?P<sign>[+-])?(?:(?P<b>\d+(?:/\d+)?)\*)?sqrt3)?"
)


class FieldScalar:
    """Exact number ``a + b*sqrt(3)``; immutable, hashable, totally ordered."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = to_rational(a)
        self.b = to_rational(b)

    @classmethod
    def _raw(cls, a: mpq, b: mpq) -> FieldScalar:
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        return obj

    @classmethod
    def parse(cls, text: str) -> FieldScalar:
        """Read the text form ``"p/q"`` or ``"p/q+r/s*sqrt3"``."""
        cleaned = text.replace(" ", "")
        m = _SCALAR_RE.fullmatch(cleaned)
        if not cleaned or m is None:
            raise ValueError(f"not an exact scalar: {text!r}")
        a = to_rational(m["a"]) if m["a"] else _ZERO
        if cleaned.endswith("sqrt3"):
            b = to_rational(m["b"]) if m["b"] else _ONE
            if m["sign"] == "-":
                b = -b
            elif m["sign"] is None and m["a"] and not m["b"]:
                raise ValueError(f"not an exact scalar: {text!r}")
        else:
            b = _ZERO
        return cls._raw(a, b)

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt3"

    def __repr__(self) -> str:
        return f"FieldScalar('{self}')"

    @property
    def is_rational(self) -> bool:
        return not self.b

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FieldScalar):
            return FieldScalar._raw(self.a + other.a, self.b + other.b)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._raw(self.a + o, self.b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FieldScalar):
            return FieldScalar._raw(self.a - other.a, self.b - other.b)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._raw(self.a - o, self.b)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._raw(o - self.a, -self.b)

    def __neg__(self):
        return FieldScalar._raw(-self.a, -self.b)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __mul__(self, other):
        if isinstance(other, FieldScalar):
            if not other.b:
                o = other.a
                return FieldScalar._raw(self.a * o, self.b * o)
            if not self.b:
                s = self.a
                return FieldScalar._raw(s * other.a, s * other.b)
            return FieldScalar._raw(
                self.a * other.a + 3 * self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._raw(self.a * o, self.b * o)

    __rmul__ = __mul__

    def inverse(self) -> FieldScalar:
        if not self.b:
            if not self.a:
                raise ZeroDivisionError("FieldScalar division by zero")
            return FieldScalar._raw(1 / self.a, _ZERO)
        norm = self.a * self.a - 3 * self.b * self.b
        return FieldScalar._raw(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        if isinstance(other, FieldScalar):
            if not other.b:
                if not other.a:
                    raise ZeroDivisionError("FieldScalar division by zero")
                return FieldScalar._raw(self.a / other.a, self.b / other.a)
            return self * other.inverse()
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("FieldScalar division by zero")
        return FieldScalar._raw(self.a / o, self.b / o)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._raw(o, _ZERO) * self.inverse()

    # order --------------------------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if not b:
            return (a > 0) - (a < 0)
        sb = 1 if b > 0 else -1
        if not a:
            return sb
        sa = 1 if a > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: the larger of a^2 and 3 b^2 wins (never equal)
        return sa if a * a > 3 * b * b else sb

    def _cmp(self, other) -> int:
        if type(other) is FieldScalar:
            if not self.b and not other.b:
                a, o = self.a, other.a
                return (a > o) - (a < o)
            return (self - other).sign()
        o = _coerce(other)
        if o is None:
            raise TypeError(f"cannot compare FieldScalar with {type(other).__name__}")
        return FieldScalar._raw(self.a - o, self.b).sign()

    def __eq__(self, other):
        if other is self:
            return True
        if type(other) is FieldScalar:
            return self.a == other.a and self.b == other.b
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return not self.b and self.a == o

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * 3**0.5

    def approx_log2(self) -> float:
        """log2 of a positive value, safe for huge or tiny magnitudes."""
        bits = max(
            64,
            2 * max(_bits(self.a), _bits(self.b)) + 64,
        )
        with gmpy2.context(precision=bits, emin=-(1 << 40), emax=1 << 40):
            v = gmpy2.mpfr(self.a) + gmpy2.mpfr(self.b) * gmpy2.sqrt(gmpy2.mpfr(3))
            if v <= 0:
                raise ValueError("approx_log2 of a non-positive value")
            return float(gmpy2.log2(v))

    def bit_length(self) -> int:
        return max(_bits(self.a), _bits(self.b))

    def sqrt(self) -> FieldScalar | None:
        """Exact square root inside Q(sqrt 3), or None if it leaves the field."""
        s = self.sign()
        if s < 0:
            return None
        if s == 0:
            return ZERO
        a, b = self.a, self.b
        if not b:
            r = _rational_sqrt(a)
            if r is not None:
                return FieldScalar._raw(r, _ZERO)
            r = _rational_sqrt(a / 3)
            if r is not None:
                return FieldScalar._raw(_ZERO, r)
            return None
        # (c + e sqrt3)^2 = c^2 + 3 e^2 + 2 c e sqrt3
        disc = _rational_sqrt(a * a - 3 * b * b)
        if disc is None:
            return None
        for c_sq in ((a + disc) / 2, (a - disc) / 2):
            c = _rational_sqrt(c_sq)
            if c is None or not c:
                continue
            e = b / (2 * c)
            cand = FieldScalar._raw(c, e)
            if cand.sign() < 0:
                cand = -cand
            if cand * cand == self:
                return cand
        return None


def _bits(q: mpq) -> int:
    return max(q.numerator.bit_length(), q.denominator.bit_length())


def _rational_sqrt(q: mpq) -> mpq | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, exact_n = gmpy2.iroot(n, 2)
    if not exact_n:
        return None
    rd, exact_d = gmpy2.iroot(d, 2)
    if not exact_d:
        return None
    return mpq(rn, rd)


_MPQ = type(_ZERO)
_MPZ = type(gmpy2.mpz(0))


def _coerce(value):
    t = type(value)
    if t is _MPQ:
        return value
    if t is int or t is _MPZ:
        return mpq(value)
    if t is Fraction:
        return mpq(value)
    return None


def scalar(value) -> FieldScalar:
    """Build a FieldScalar from an int, rational, text form, or FieldScalar."""
    if isinstance(value, FieldScalar):
        return value
    if isinstance(value, str):
        return FieldScalar.parse(value)
    return FieldScalar._raw(to_rational(value), _ZERO)


ZERO = FieldScalar._raw(_ZERO, _ZERO)
ONE = FieldScalar._raw(_ONE, _ZERO)
SQRT3 = FieldScalar._raw(_ZERO, _ONE)


def sign(s: FieldScalar) -> int:
    """Exact sign of ``a + b*sqrt(3)`` as -1, 0 or +1."""
    return s.sign()


def _pow4(i: int) -> FieldScalar:
    if i >= 0:
        return FieldScalar._raw(mpq(1, 1 << (2 * i)) if i else _ONE, _ZERO)
    return FieldScalar._raw(mpq(1 << (-2 * i)), _ZERO)


def _at_least_pow4(num: int, den: int, i: int) -> bool:
    # num/den >= 4**-i, by shifting instead of building the power
    if i >= 0:
        return (num << (2 * i)) >= den
    return num >= (den << (-2 * i))


def level_of_sq(d_sq: FieldScalar) -> int:
    """Integer ``i`` with ``4**-i <= d_sq < 4**(1-i)``.

    This is the distance level ``d in [2**-i, 2**(1-i))`` read off the squared
    distance, so no square root is ever taken.
    """
    d_sq = scalar(d_sq)
    if d_sq.sign() <= 0:
        raise ValueError("level is undefined for a non-positive squared distance")
    if not d_sq.b:
        num, den = int(d_sq.a.numerator), int(d_sq.a.denominator)
        i = -((num.bit_length() - den.bit_length()) // 2)
        while not _at_least_pow4(num, den, i):
            i += 1
        while _at_least_pow4(num, den, i - 1):
            i -= 1
        return i
    log2 = d_sq.approx_log2()
    i = -int(log2 // 2)
    # the estimate is within one of the answer; settle it exactly
    while d_sq < _pow4(i):
        i += 1
    while d_sq >= _pow4(i - 1):
        i -= 1
    return i


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True, slots=True)
class Point2:
    x: FieldScalar
    y: FieldScalar

    def __eq__(self, other):
        if other is self:
            return True
        if type(other) is not Point2:
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def _order(self, other: Point2) -> int:
        c = self.x._cmp(other.x)
        return c if c else self.y._cmp(other.y)

    def __lt__(self, other: Point2) -> bool:
        return self._order(other) < 0

    def __le__(self, other: Point2) -> bool:
        return self._order(other) <= 0

    def __gt__(self, other: Point2) -> bool:
        return self._order(other) > 0

    def __ge__(self, other: Point2) -> bool:
        return self._order(other) >= 0

    @classmethod
    def of(cls, x, y) -> Point2:
        return cls(scalar(x), scalar(y))

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point2:
        return Point2(-self.x, -self.y)

    def scale(self, k) -> Point2:
        return Point2(self.x * k, self.y * k)

    def dot(self, other: Point2) -> FieldScalar:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> FieldScalar:
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> FieldScalar:
        return self.x * self.x + self.y * self.y

    def is_origin(self) -> bool:
        return not self.x and not self.y

    def lex_positive(self) -> bool:
        """East, or due North when there is no East component."""
        sx = self.x.sign()
        return sx > 0 or (sx == 0 and self.y.sign() > 0)

    def to_text(self) -> list[str]:
        return [str(self.x), str(self.y)]

    @classmethod
    def from_text(cls, pair: Sequence) -> Point2:
        if len(pair) != 2:
            raise ValueError(f"a point needs two coordinates, got {len(pair)}")
        return cls(scalar(pair[0]), scalar(pair[1]))

    def __repr__(self) -> str:
        return f"Point2({self.x}, {self.y})"


ORIGIN = Point2(ZERO, ZERO)


def dist_sq(p: Point2, q: Point2) -> FieldScalar:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the turn a -> b -> c (+1 counter-clockwise)."""
    return (b - a).cross(c - a).sign()


def midpoint(p: Point2, q: Point2) -> Point2:
    half = mpq(1, 2)
    return Point2((p.x + q.x) * half, (p.y + q.y) * half)


def lerp(p: Point2, q: Point2, t) -> Point2:
    """Point at fraction ``t`` of the way from ``p`` to ``q``."""
    return Point2(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t)


# ---------------------------------------------------------------------------
# smallest enclosing circle


@dataclass(frozen=True, slots=True)
class Circle:
    center: Point2
    radius_sq: FieldScalar

    def __post_init__(self):
        if self.radius_sq.sign() < 0:
            raise ValueError("radius_sq must be non-negative")

    def contains(self, p: Point2) -> bool:
        return dist_sq(self.center, p) <= self.radius_sq


def circle_from_diameter(p: Point2, q: Point2) -> Circle:
    c = midpoint(p, q)
    return Circle(c, dist_sq(c, p))


def circumcircle(a: Point2, b: Point2, c: Point2) -> Circle | None:
    """Circle through three points, or None when they are collinear."""
    bx, by = b.x - a.x, b.y - a.y
    cx, cy = c.x - a.x, c.y - a.y
    d = (bx * cy - by * cx) * 2
    if not d:
        return None
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Circle(Point2(a.x + ux, a.y + uy), ux * ux + uy * uy)


def smallest_enclosing_circle(points: Iterable[Point2]) -> Circle:
    """Exact smallest enclosing circle.

    Incremental (Welzl-style) construction in input order; each containment
    test is an exact squared-distance comparison.  Worst case cubic, which is
    fine for swarms of a few hundred robots.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("smallest_enclosing_circle needs at least one point")
    circle = Circle(pts[0], ZERO)
    for i in range(1, len(pts)):
        p = pts[i]
        if circle.contains(p):
            continue
        circle = Circle(p, ZERO)
        for j in range(i):
            q = pts[j]
            if circle.contains(q):
                continue
            circle = circle_from_diameter(p, q)
            for k in range(j):
                r = pts[k]
                if circle.contains(r):
                    continue
                cc = circumcircle(p, q, r)
                if cc is None:
                    raise AssertionError("collinear support triple; SEC invariant broken")
                circle = cc
    return circle


# ---------------------------------------------------------------------------
# lines and hulls


@dataclass(frozen=True)
class LineFrame:
    origin: Point2
    direction: Point2
    params: tuple[FieldScalar, ...]

    def point_at(self, t) -> Point2:
        return self.origin + self.direction.scale(t)


def collinear_frame(points: Iterable[Point2]) -> LineFrame | None:
    """Parametrize collinear points as ``origin + t*direction``.

    ``origin`` is the lexicographically smallest point and ``direction`` is
    normalized to ``(1, slope)`` or ``(0, 1)``, so parameters stay in the
    field and their differences are proportional to along-line distances.
    Returns None if the points are not collinear.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("collinear_frame needs at least one point")
    origin = pts[0]
    if len(pts) == 1:
        return LineFrame(origin, Point2(ONE, ZERO), (ZERO,))
    span = pts[-1] - origin
    for p in pts[1:-1]:
        if (p - origin).cross(span):
            return None
    if span.x:
        direction = Point2(ONE, span.y / span.x)
        params = tuple((p.x - origin.x) for p in pts)
    else:
        direction = Point2(ZERO, ONE)
        params = tuple((p.y - origin.y) for p in pts)
    return LineFrame(origin, direction, params)


def convex_hull(points: Iterable[Point2]) -> list[Point2]:
    """Counter-clockwise hull vertices (monotone chain, collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point2] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def in_hull(p: Point2, hull: Sequence[Point2]) -> bool:
    """Whether ``p`` lies in the closed convex hull given by :func:`convex_hull`."""
    if not hull:
        return False
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        if orientation(a, b, p):
            return False
        return (p - a).dot(p - b).sign() <= 0
    n = len(hull)
    return all(orientation(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))
