"""Robots, private frames, configurations, and the Look step."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable

from gmpy2 import mpq

from .field import ORIGIN, FieldScalar, Point2, level_of_sq, to_rational


@dataclass(frozen=True)
class Frame:
    """Rational similarity ``v -> R(M v)`` with ``M = [[a, -b], [b, a]]``.

    ``R`` mirrors the local y axis when ``reflect`` is set.  The frame has no
    translation part: views are always centred on the observer.
    """

    a: mpq = mpq(1)
    b: mpq = mpq(0)
    reflect: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", to_rational(self.a))
        object.__setattr__(self, "b", to_rational(self.b))
        if not (self.a or self.b):
            raise ValueError("frame is not invertible (a = b = 0)")

    @property
    def scale_sq(self) -> mpq:
        return self.a * self.a + self.b * self.b

    @property
    def is_identity(self) -> bool:
        return self.a == 1 and not self.b and not self.reflect

    def apply(self, v: Point2) -> Point2:
        if self.is_identity:
            return v
        a, b = self.a, self.b
        x = v.x * a - v.y * b
        y = v.x * b + v.y * a
        return Point2(x, -y if self.reflect else y)

    def unapply(self, w: Point2) -> Point2:
        """Inverse of :meth:`apply`."""
        if self.is_identity:
            return w
        wy = -w.y if self.reflect else w.y
        s = self.scale_sq
        a, b = self.a / s, self.b / s
        return Point2(w.x * a + wy * b, wy * a - w.x * b)

    def then(self, other: Frame) -> Frame:
        """Frame applying ``self`` first and ``other`` second."""
        # R2 M2 R1 M1 = R2 R1 (R1 M2 R1) M1, and conjugating by R flips b
        b2 = -other.b if self.reflect else other.b
        a = other.a * self.a - b2 * self.b
        b = other.a * self.b + b2 * self.a
        return Frame(a, b, self.reflect != other.reflect)

    def inverse(self) -> Frame:
        s = self.scale_sq
        if self.reflect:
            return Frame(self.a / s, self.b / s, True)
        return Frame(self.a / s, -self.b / s, False)


IDENTITY = Frame()


@dataclass(frozen=True)
class Robot:
    id: int
    position: Point2
    frame: Frame = IDENTITY
    crashed: bool = False


@dataclass(frozen=True)
class Configuration:
    robots: tuple[Robot, ...]
    round: int = 0

    def __post_init__(self):
        object.__setattr__(self, "robots", tuple(self.robots))

    def occupied(self) -> tuple[Point2, ...]:
        return tuple(sorted({r.position for r in self.robots}))

    def is_gathered(self) -> bool:
        first = self.robots[0].position
        return all(r.position == first for r in self.robots)

    def crash_locations(self) -> tuple[Point2, ...]:
        return tuple(sorted({r.position for r in self.robots if r.crashed}))

    def correct(self) -> tuple[Robot, ...]:
        return tuple(r for r in self.robots if not r.crashed)

    def by_id(self, robot_id: int) -> Robot:
        for r in self.robots:
            if r.id == robot_id:
                return r
        raise KeyError(robot_id)

    def violations(self) -> list[str]:
        out = []
        if not self.robots:
            out.append("configuration has no robots")
        if len(self.crash_locations()) > 1:
            out.append("crashed robots must share a single crashed location")
        ids = [r.id for r in self.robots]
        if len(set(ids)) != len(ids):
            out.append("robot ids must be unique")
        return out

    def moved(self, positions: dict[int, Point2]) -> Configuration:
        robots = tuple(
            replace(r, position=positions[r.id]) if r.id in positions else r
            for r in self.robots
        )
        return Configuration(robots, self.round + 1)


@dataclass(frozen=True)
class LocalView:
    """Deduplicated occupied points in the observer's frame; observer at origin."""

    points: tuple[Point2, ...] = field(default=(ORIGIN,))

    def __post_init__(self):
        pts = tuple(sorted(set(self.points)))
        if ORIGIN not in pts:
            raise ValueError("a local view always contains the observer at (0, 0)")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def others(self) -> tuple[Point2, ...]:
        return tuple(p for p in self.points if not p.is_origin())

    def other(self) -> Point2:
        """The non-origin point of a two-point view."""
        if len(self.points) != 2:
            raise ValueError(f"expected a two-point view, got {len(self.points)} points")
        a, b = self.points
        return b if a.is_origin() else a

    def transformed(self, frame: Frame) -> LocalView:
        return LocalView(tuple(frame.apply(p) for p in self.points))


def observe(config: Configuration, robot: Robot) -> LocalView:
    """Look: occupied points, translated to the robot and seen through its frame."""
    here = robot.position
    frame = robot.frame
    pts = {frame.apply(p - here) for p in {r.position for r in config.robots}}
    return LocalView(tuple(pts))


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    def flipped(self) -> Side:
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


def side_of(view: LocalView) -> Side:
    """Left iff the other point lies East, or due North when not East."""
    return Side.LEFT if view.other().lex_positive() else Side.RIGHT


def local_level(view: LocalView) -> int:
    return level_of_sq(view.other().norm_sq())


def robot_levels(config: Configuration) -> list[int]:
    occupied = config.occupied()
    if len(occupied) != 2:
        raise ValueError(f"levels need exactly two occupied points, got {len(occupied)}")
    gap = occupied[1] - occupied[0]
    d_sq = gap.norm_sq()
    return [level_of_sq(d_sq * r.frame.scale_sq) for r in config.correct()]


def delta_level(config: Configuration) -> int:
    levels = robot_levels(config)
    return max(levels) - min(levels) if levels else 0


def lowest_level(config: Configuration) -> int:
    levels = robot_levels(config)
    if not levels:
        raise ValueError("no correct robot to take a level from")
    return min(levels)


def make_configuration(
    specs: Iterable[tuple[Point2, Frame] | tuple[Point2, Frame, bool]],
) -> Configuration:
    """Number robots 0..n-1 from ``(position, frame[, crashed])`` tuples."""
    robots = []
    for i, spec in enumerate(specs):
        pos, frame, *rest = spec
        robots.append(Robot(i, pos, frame, bool(rest[0]) if rest else False))
    return Configuration(tuple(robots))


def global_level(d_sq: FieldScalar) -> int:
    """Level measured in the analysis frame (unit scale)."""
    return level_of_sq(d_sq)
