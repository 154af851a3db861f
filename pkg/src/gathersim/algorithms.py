"""Decision functions: local view in, local destination out.

``suig_decide`` is the crash-tolerant gathering rule built on level bands,
``suir_decide`` the two-robot rule on levels mod 4, ``axis_rdv_decide`` the
fault-free rendezvous for robots sharing one full axis.  Line algorithms act
on ``(side, squared distance)`` and are lifted to the plane by
:func:`lift_line_algorithm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable, Union

from gmpy2 import mpq

from .field import (
    ORIGIN,
    SQRT3,
    FieldScalar,
    Point2,
    collinear_frame,
    level_of_sq,
    smallest_enclosing_circle,
)
from .model import LocalView, Side, local_level, side_of

HALF = mpq(1, 2)
ONE = mpq(1)
NINTH = mpq(1, 9)
TENTH = mpq(1, 10)

#: gap-to-span ratios that single out the crashed extremity
EXTREMITY_RATIOS = frozenset(
    mpq(*r) for r in ((1, 9), (1, 8), (9, 80), (10, 81), (10, 18), (9, 16), (80, 81))
)


@dataclass(frozen=True)
class Phase:
    tag: str
    k: int | None = None
    anchor: Point2 | None = None

    def __str__(self) -> str:
        if self.k is not None:
            return f"{self.tag}({self.k})"
        return self.tag

    @property
    def two_point(self) -> bool:
        return self.tag in ("A", "B", "C1", "C2", "C3")


TSEC = Phase("Tsec")


@dataclass(frozen=True)
class MoveCommand:
    """Destination in the deciding robot's frame; ``(0, 0)`` means stay.

    The remaining fields are bookkeeping for traces and checks.
    """

    destination: Point2 = ORIGIN
    phase: Phase | None = None
    fraction: mpq | None = None
    side: Side | None = None
    level: int | None = None

    @property
    def is_stay(self) -> bool:
        return self.destination.is_origin()


STAY = MoveCommand()


def band_start(k: int) -> int:
    """First level of band group ``k``: ``k(k+2)``."""
    return k * (k + 2)


def phase_of_level(level: int) -> Phase:
    """Band of a two-point view from the observer's level.

    Group ``k`` starts at ``S_k = k(k+2)``: ``k`` levels of A, ``k`` of B,
    then one level each of C1, C2, C3.  Everything below level 1 is A(0).
    """
    if level < 1:
        return Phase("A", 0)
    k = isqrt(level + 1) - 1
    offset = level - band_start(k)
    if offset < k:
        return Phase("A", k)
    if offset < 2 * k:
        return Phase("B", k)
    return Phase(("C1", "C2", "C3")[offset - 2 * k], k)


def classify_view(view: LocalView) -> Phase:
    if len(view) == 2:
        return phase_of_level(local_level(view))
    if len(view) == 1:
        return TSEC
    line = collinear_frame(view.points)
    if line is None:
        return TSEC
    params = line.params
    span = params[-1] - params[0]
    hits = []
    for end, gap in ((0, params[1] - params[0]), (-1, params[-1] - params[-2])):
        ratio = gap / span
        if ratio.is_rational and ratio.a in EXTREMITY_RATIOS:
            hits.append(line.point_at(params[end]))
    if len(hits) == 1:
        return Phase("Text", anchor=hits[0])
    return TSEC


# (phase tag) -> (fraction when left, fraction when right)
_SUIG_MOVES = {
    "A": (HALF, HALF),
    "B": (NINTH, TENTH),
    "C1": (HALF, HALF),
    "C2": (ONE, HALF),
    "C3": (HALF, ONE),
}


def suig_decide(view: LocalView) -> MoveCommand:
    phase = classify_view(view)
    if phase.two_point:
        side = side_of(view)
        frac = _SUIG_MOVES[phase.tag][0 if side is Side.LEFT else 1]
        other = view.other()
        return MoveCommand(other.scale(frac), phase, frac, side, local_level(view))
    if phase.tag == "Text":
        return MoveCommand(phase.anchor, phase)
    return MoveCommand(smallest_enclosing_circle(view.points).center, phase)


# ---------------------------------------------------------------------------
# line algorithms and the lift


@dataclass(frozen=True)
class ParamTarget:
    """Line destination given as a signed coordinate in the robot's 1D frame."""

    value: FieldScalar


LineResult = Union[mpq, int, ParamTarget]
LineAlgorithm = Callable[[Side, FieldScalar], LineResult]


def suir_line(side: Side, d_sq: FieldScalar) -> mpq:
    """Fraction of the way toward the other robot, from level mod 4 and side."""
    residue = level_of_sq(d_sq) % 4
    if residue % 2 == 0:
        return HALF
    if residue == 1:
        return HALF if side is Side.LEFT else ONE
    return ONE if side is Side.LEFT else HALF


def midpoint_line(side: Side, d_sq: FieldScalar) -> mpq:
    return HALF


def stay_line(side: Side, d_sq: FieldScalar) -> mpq:
    return mpq(0)


def _line_fraction(result: LineResult, side: Side, d_sq: FieldScalar) -> mpq | FieldScalar:
    if not isinstance(result, ParamTarget):
        return mpq(result)
    dist = d_sq.sqrt()
    if dist is None:
        raise ValueError("param target needs a distance inside Q(sqrt 3)")
    signed = dist if side is Side.LEFT else -dist
    return result.value / signed


def lift_line_algorithm(line_algo: LineAlgorithm) -> Callable[[LocalView], MoveCommand]:
    """Run a line algorithm on a two-robot planar view.

    The robot orients the line through both points lexicographically, so its
    1D view is ``{0, b}`` with ``b > 0`` exactly when it sees itself on the
    left.  The 1D answer is a fraction of ``b`` and maps back as that same
    fraction of the planar offset; no norm is ever extracted.
    """

    def decide(view: LocalView) -> MoveCommand:
        if len(view) == 1:
            return STAY
        if len(view) > 2:
            raise ValueError("lifted line algorithms only apply to two-robot systems")
        other = view.other()
        side = side_of(view)
        d_sq = other.norm_sq()
        frac = _line_fraction(line_algo(side, d_sq), side, d_sq)
        return MoveCommand(other.scale(frac), None, frac, side, level_of_sq(d_sq))

    decide.__name__ = f"lifted_{getattr(line_algo, '__name__', 'line')}"
    return decide


def suir_decide(view: LocalView) -> MoveCommand:
    if len(view) > 2:
        raise ValueError("the rendezvous rule needs at most two occupied points")
    if len(view) == 1:
        return STAY
    side = side_of(view)
    level = local_level(view)
    frac = suir_line(side, view.other().norm_sq())
    return MoveCommand(view.other().scale(frac), None, frac, side, level)


def axis_rdv_decide(view: LocalView) -> MoveCommand:
    """Fault-free rendezvous for robots agreeing on the y axis.

    Level robots head for the northern apex of the equilateral triangle on
    their segment; otherwise the southern robot walks to the northern one,
    which stays put.
    """
    if len(view) > 2:
        raise ValueError("axis rendezvous is a two-robot algorithm")
    if len(view) == 1:
        return STAY
    other = view.other()
    sy = other.y.sign()
    if sy == 0:
        x = other.x
        return MoveCommand(Point2(x * HALF, abs(x) * SQRT3 * HALF))
    if sy > 0:
        return MoveCommand(other, fraction=ONE)
    return STAY


lifted_suir = lift_line_algorithm(suir_line)
lifted_midpoint = lift_line_algorithm(midpoint_line)

ALGORITHMS: dict[str, Callable[[LocalView], MoveCommand]] = {
    "suig": suig_decide,
    "suir": suir_decide,
    "axis_rdv": axis_rdv_decide,
    "lifted_suir": lifted_suir,
    "midpoint": lifted_midpoint,
}


def get_algorithm(name: str) -> Callable[[LocalView], MoveCommand]:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}"
        ) from None
