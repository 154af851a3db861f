from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq
from hypothesis import strategies as st

from gathersim.field import FieldScalar, Point2, scalar
from gathersim.model import Frame

small_ints = st.integers(min_value=-64, max_value=64)
denoms = st.sampled_from([1, 2, 3, 4, 5, 8, 9, 10, 16, 81])


@st.composite
def rationals(draw, nonzero: bool = False):
    n = draw(small_ints.filter(bool) if nonzero else small_ints)
    return mpq(n, draw(denoms))


@st.composite
def field_scalars(draw):
    return FieldScalar(draw(rationals()), draw(rationals()))


@st.composite
def rational_points(draw):
    return Point2(scalar(draw(rationals())), scalar(draw(rationals())))


@st.composite
def field_points(draw):
    return Point2(draw(field_scalars()), draw(field_scalars()))


@st.composite
def frames(draw):
    a = draw(rationals())
    b = draw(rationals())
    if not a and not b:
        a = mpq(1)
    return Frame(a, b, draw(st.booleans()))


def as_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))
