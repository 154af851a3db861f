"""Seeded random scenario builders for sweeps and property runs."""

from __future__ import annotations

import random
from dataclasses import replace

from gmpy2 import mpq

from .engine import FSYNC, RIGID, MovementAdversary, Scheduler
from .field import Point2, scalar
from .model import Configuration, Frame, Robot, delta_level, lowest_level
from .scenario import Scenario

# primitive Pythagorean triples give exact unit rotations
_TRIPLES = ((1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29))
_IRREGULAR = (mpq(1), mpq(5, 4), mpq(3, 2), mpq(7, 4), mpq(9, 8))


def unit_direction(rng: random.Random) -> tuple[mpq, mpq]:
    p, q, h = rng.choice(_TRIPLES)
    c, s = mpq(p, h), mpq(q, h)
    if rng.random() < 0.5:
        c, s = s, c
    return (c if rng.random() < 0.5 else -c, s if rng.random() < 0.5 else -s)


def random_frame(rng: random.Random, max_shrink: int = 4, irregular: bool = True) -> Frame:
    """Rotation, optional reflection, and a unit ``2**-e * rho`` with ``rho`` in [1, 2)."""
    c, s = unit_direction(rng)
    scale = mpq(1, 1 << rng.randint(0, max_shrink))
    if irregular:
        scale *= rng.choice(_IRREGULAR)
    return Frame(c * scale, s * scale, rng.random() < 0.5)


def _random_point(rng: random.Random, span: int = 8) -> Point2:
    return Point2(
        scalar(mpq(rng.randint(-span * 16, span * 16), 16)),
        scalar(mpq(rng.randint(-span * 16, span * 16), 16)),
    )


def two_point_positions(rng: random.Random, level: int) -> tuple[Point2, Point2]:
    """Two points whose unit-scale distance has the given level."""
    x = _random_point(rng)
    c, s = unit_direction(rng)
    d = mpq(1, 1 << level) if level >= 0 else mpq(1 << -level)
    d *= 1 + mpq(rng.randint(0, 15), 16)
    return x, Point2(x.x + scalar(c * d), x.y + scalar(s * d))


def _robots(specs) -> Configuration:
    return Configuration(tuple(Robot(i, p, f, c) for i, (p, f, c) in enumerate(specs)))


def suig_two_point(
    seed: int,
    n: int,
    *,
    bivalent: bool = False,
    crash: str = "none",
    max_level: int = 56,
    max_shrink: int = 4,
) -> Configuration:
    """Two occupied points, mixed frames.

    ``crash`` is ``"none"``, ``"alone"`` (every robot at the crash point is
    crashed) or ``"collocated"`` (correct robots share the crash point).
    """
    rng = random.Random(seed)
    x, y = two_point_positions(rng, rng.randint(-3, max_level))
    if bivalent:
        n += n % 2
        at_x = n // 2
    else:
        at_x = rng.randint(1, n - 1)
    if crash == "collocated":
        at_x = max(at_x, 2)
        n = max(n, at_x + 1)
    specs = []
    for i in range(n):
        pos = x if i < at_x else y
        specs.append([pos, random_frame(rng, max_shrink), False])
    if crash == "alone":
        for s in specs[:at_x]:
            s[2] = True
    elif crash == "collocated":
        for s in specs[: rng.randint(1, at_x - 1)]:
            s[2] = True
    return _robots(specs)


def suig_multi_point(seed: int, n: int, *, aligned: bool = False, crash: bool = False) -> Configuration:
    """Three or more occupied points, possibly with multiplicities."""
    rng = random.Random(seed)
    n = max(n, 3)
    k = rng.randint(3, min(n, 6))
    if aligned:
        origin = _random_point(rng)
        c, s = unit_direction(rng)
        params = rng.sample(range(0, 200), k)
        spots = [
            Point2(origin.x + scalar(c * mpq(t, 16)), origin.y + scalar(s * mpq(t, 16)))
            for t in params
        ]
    else:
        spots = []
        while len(set(spots)) < k:
            spots.append(_random_point(rng))
        spots = list(dict.fromkeys(spots))
    owners = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
    rng.shuffle(owners)
    specs = [[spots[o], random_frame(rng), False] for o in owners]
    if crash:
        target = spots[rng.randrange(k)]
        holders = [s for s in specs if s[0] == target]
        for s in holders[: rng.randint(1, len(holders))]:
            s[2] = True
    return _robots(specs)


def suig_scenario(config: Configuration, max_rounds: int = 10_000) -> Scenario:
    return Scenario("suig", config, FSYNC, RIGID, max_rounds)


def suig_no_crash_case(seed: int) -> Configuration:
    """One draw from the no-crash mix: two-point, bivalent, multiplicity, aligned."""
    rng = random.Random(seed * 7919 + 1)
    n = rng.randint(2, 16)
    kind = rng.choice(("two", "two", "bivalent", "bivalent", "multi", "aligned"))
    if kind in ("two", "bivalent") or n < 3:
        while True:
            cfg = suig_two_point(rng.randrange(1 << 30), n, bivalent=kind == "bivalent")
            if delta_level(cfg) <= 5 and lowest_level(cfg) <= 60:
                return cfg
    return suig_multi_point(rng.randrange(1 << 30), n, aligned=kind == "aligned")


def suig_crash_case(seed: int) -> Configuration:
    """One draw from the crash mix; the crashed robots share one point."""
    rng = random.Random(seed * 104729 + 3)
    n = rng.randint(2, 16)
    kind = rng.choice(("alone", "alone", "collocated", "collocated", "multi", "aligned"))
    if kind in ("alone", "collocated") or n < 3:
        crash = kind if kind in ("alone", "collocated") else "alone"
        return suig_two_point(rng.randrange(1 << 30), n, crash=crash, bivalent=rng.random() < 0.3)
    return suig_multi_point(rng.randrange(1 << 30), n, aligned=kind == "aligned", crash=True)


def suir_pair(
    seed: int,
    *,
    policy: str = "rigid",
    delta: mpq = mpq(1),
    crash: bool = False,
    max_distance: int = 4,
) -> Scenario:
    """Two robots on a line with a rational unit direction, so lengths stay exact."""
    rng = random.Random(seed)
    x = _random_point(rng, 4)
    c, s = unit_direction(rng)
    d = mpq(rng.randint(1, max_distance * 64), 64)
    y = Point2(x.x + scalar(c * d), x.y + scalar(s * d))
    frames = [random_frame(rng, max_shrink=3), random_frame(rng, max_shrink=3)]
    crashed = [False, False]
    if crash:
        crashed[rng.randrange(2)] = True
    config = _robots([(x, frames[0], crashed[0]), (y, frames[1], crashed[1])])
    adversary = MovementAdversary(policy, delta, seed)
    return Scenario("suir", config, Scheduler("fsync", seed), adversary, 10_000)


def with_algorithm(scenario: Scenario, name: str) -> Scenario:
    return replace(scenario, algorithm=name)
