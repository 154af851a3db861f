"""Executable checks of the correctness lemmas: case tables, trace monitors,
the round-complexity bound, the crash-detection geometry, the impossibility
schedule, the one-dimensional lift, and the axis rendezvous.

Every check returns plain dataclasses so the CLI can print a table and dump
JSON without knowing what each check measures.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from math import isqrt
from typing import Callable, Iterable

from gmpy2 import mpq

from .algorithms import (
    HALF,
    ONE,
    LineAlgorithm,
    Phase,
    classify_view,
    get_algorithm,
    suir_line,
)
from .engine import (
    FSYNC,
    RIGID,
    MovementAdversary,
    Scheduler,
    Trace,
    global_target,
    run,
)
from .field import (
    ORIGIN,
    SQRT3,
    FieldScalar,
    Point2,
    convex_hull,
    dist_sq,
    in_hull,
    level_of_sq,
    scalar,
)
from .generators import random_frame, unit_direction
from .model import (
    Configuration,
    Frame,
    Robot,
    Side,
    delta_level,
    local_level,
    lowest_level,
    observe,
    side_of,
)
from .scenario import Scenario

#: frozen after the calibration sweep recorded in the README
C1 = 4
C2 = 8

LEVEL_JUMP_LIMIT = 7


@dataclass
class CaseReport:
    case_id: str
    expected: str
    observed: str
    rounds: int
    passed: bool


@dataclass
class MonitorResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)


def _sqrt_gap_at_least(a: FieldScalar, b: FieldScalar, c: FieldScalar) -> bool:
    """``sqrt(a) - sqrt(b) >= sqrt(c)`` for nonnegative ``a, b, c``, exactly."""
    rest = a - b - c
    if rest < 0:
        return False
    return rest * rest >= b * c * 4


# ---------------------------------------------------------------------------
# two-robot rendezvous case tables

# level of the pair at unit scale; each robot's frame shifts its own level
_BASE_LEVEL = 10
_BASE_DISTANCE = mpq(17, 16 << _BASE_LEVEL)

COMMON_TABLE: dict[tuple[int, int], tuple[int, int] | None] = {
    (0, 0): None, (0, 1): (2, 1), (0, 2): None, (0, 3): None,
    (1, 0): None, (1, 1): (2, 2), (1, 2): None, (1, 3): None,
    (2, 0): None, (2, 1): (2, 3), (2, 2): None, (2, 3): None,
    (3, 0): (1, 0), (3, 1): (1, 3), (3, 2): (3, 0), (3, 3): (0, 0),
}

OPPOSITE_TABLE: dict[tuple[str, int, int], tuple[str, int, int] | None] = {
    ("L", 0, 0): None, ("L", 0, 1): None, ("L", 0, 2): None, ("L", 0, 3): ("R", 0, 1),
    ("L", 1, 1): None, ("L", 1, 2): None, ("L", 1, 3): ("R", 0, 2),
    ("L", 2, 2): None, ("L", 2, 3): ("R", 0, 3), ("L", 3, 3): ("R", 3, 3),
    ("R", 0, 0): None, ("R", 0, 1): ("L", 1, 2), ("R", 0, 2): None, ("R", 0, 3): None,
    ("R", 1, 1): ("L", 1, 1), ("R", 1, 2): ("L", 2, 3), ("R", 1, 3): ("L", 0, 2),
    ("R", 2, 2): None, ("R", 2, 3): None, ("R", 3, 3): None,
}


def _frame_for(residue: int, orientation: int) -> Frame:
    """Frame whose level on the base pair is ``8 + residue``."""
    shift = _BASE_LEVEL - (8 + residue)
    unit = mpq(1 << shift) if shift >= 0 else mpq(1, 1 << -shift)
    return Frame(unit * orientation, 0)


def _pair(frame0: Frame, frame1: Frame, crashed1: bool = False) -> Configuration:
    return Configuration(
        (
            Robot(0, ORIGIN, frame0),
            Robot(1, Point2(scalar(_BASE_DISTANCE), scalar(0)), frame1, crashed1),
        )
    )


def pair_class(config: Configuration):
    """``("common", (i, j))`` or ``("L"|"R", (i, j))`` with residues mod 4."""
    robots = config.robots
    views = [observe(config, r) for r in robots]
    sides = [side_of(v) for v in views]
    levels = [local_level(v) % 4 for v in views]
    if sides[0] != sides[1]:
        left = 0 if sides[0] is Side.LEFT else 1
        return "common", (levels[left], levels[1 - left])
    tag = "L" if sides[0] is Side.LEFT else "R"
    return tag, tuple(sorted(levels))


def _suir_trace(config: Configuration, max_rounds: int = 16) -> Trace:
    return run(Scenario("suir", config, FSYNC, RIGID, max_rounds))


def _class_text(cls) -> str:
    if cls is None:
        return "gathered in 1"
    if len(cls) == 2:
        return f"({cls[0]},{cls[1]})"
    return f"{cls[0]}({cls[1]},{cls[2]})"


def _observed_after_one(trace: Trace, opposite: bool) -> str:
    if trace.rounds >= 1 and trace.configs[1].is_gathered():
        return "gathered in 1"
    if trace.rounds < 1:
        return "no round"
    tag, levels = pair_class(trace.configs[1])
    if opposite:
        return _class_text((tag, *levels)) if tag != "common" else f"common{levels}"
    return _class_text(levels) if tag == "common" else f"{tag}{levels}"


def verify_suir_common() -> list[CaseReport]:
    reports = []
    for (i, j), successor in COMMON_TABLE.items():
        config = _pair(_frame_for(i, 1), _frame_for(j, 1))
        assert pair_class(config) == ("common", (i, j))
        trace = _suir_trace(config)
        expected = _class_text(successor)
        observed = _observed_after_one(trace, opposite=False)
        ok = observed == expected and trace.verdict.gathered and trace.rounds <= 3
        reports.append(CaseReport(f"common({i},{j})", expected, observed, trace.rounds, ok))
    return reports


def verify_suir_opposite() -> list[CaseReport]:
    reports = []
    for (tag, i, j), successor in OPPOSITE_TABLE.items():
        # robot 0 sees robot 1 to its east with a positive unit
        sign0 = 1 if tag == "L" else -1
        config = _pair(_frame_for(i, sign0), _frame_for(j, -sign0))
        assert pair_class(config) == (tag, (i, j))
        trace = _suir_trace(config)
        expected = _class_text(successor)
        observed = _observed_after_one(trace, opposite=True)
        ok = observed == expected and trace.verdict.gathered and trace.rounds <= 3
        reports.append(CaseReport(f"{tag}({i},{j})", expected, observed, trace.rounds, ok))
    return reports


def verify_suir_crash() -> list[CaseReport]:
    reports = []
    for side in (Side.LEFT, Side.RIGHT):
        for residue in range(4):
            orientation = 1 if side is Side.LEFT else -1
            config = _pair(_frame_for(residue, orientation), Frame(1, 0), crashed1=True)
            crash = config.robots[1].position
            trace = _suir_trace(config)
            at_crash = trace.verdict.gathered and trace.verdict.point == crash
            observed = f"gathered at crash in {trace.rounds}" if at_crash else str(trace.verdict)
            ok = at_crash and trace.rounds <= 4
            reports.append(
                CaseReport(
                    f"crash-{side.value}-{residue}", "gathered at crash in <= 4", observed, trace.rounds, ok
                )
            )
    return reports


# ---------------------------------------------------------------------------
# trace monitors


def _pair_distances(trace: Trace) -> list[FieldScalar]:
    out = []
    for config in trace.configs:
        a, b = config.robots[0].position, config.robots[1].position
        out.append(dist_sq(a, b))
    if trace.verdict is not None and trace.verdict.gathered:
        # gathering is absorbing, so later distances are zero
        out.extend([scalar(0), scalar(0)])
    return out


def monitor_contraction(trace: Trace, delta=None) -> MonitorResult:
    """Two rounds after distance ``d >= delta`` the distance is at most ``d - min(delta, d/2)``."""
    delta = mpq(trace.movement.delta if delta is None else delta)
    delta_sq = scalar(delta * delta)
    d = _pair_distances(trace)
    result = MonitorResult("contraction", True)
    for t in range(len(d) - 2):
        d0, d2 = d[t], d[t + 2]
        if d0 < delta_sq:
            continue
        result.checked += 1
        if delta_sq * 4 <= d0:
            ok = _sqrt_gap_at_least(d0, d2, delta_sq)
        else:
            ok = d2 * 4 <= d0
        if not ok:
            result.passed = False
            result.failures.append(f"round {t}: d^2 {d0} -> {d2}")
    return result


def monitor_level_jump(trace: Trace, limit: int = LEVEL_JUMP_LIMIT) -> MonitorResult:
    """Unit-scale level of two-point configurations rises by at most ``limit``."""
    result = MonitorResult("level_jump", True)
    previous = None
    worst = 0
    for config in trace.configs:
        occupied = config.occupied()
        if len(occupied) != 2:
            continue
        level = level_of_sq(dist_sq(*occupied))
        if previous is not None:
            result.checked += 1
            jump = level - previous[1]
            worst = max(worst, jump)
            if jump > limit:
                result.passed = False
                result.failures.append(f"round {previous[0]} -> {config.round}: level {previous[1]} -> {level}")
        previous = (config.round, level)
    result.detail["max_jump"] = worst
    return result


def monitor_hull(trace: Trace) -> MonitorResult:
    result = MonitorResult("hull", True)
    for before, after in zip(trace.configs, trace.configs[1:]):
        hull = convex_hull(before.occupied())
        result.checked += 1
        outside = [p for p in after.occupied() if not in_hull(p, hull)]
        if outside:
            result.passed = False
            result.failures.append(f"round {after.round}: {len(outside)} point(s) left the hull")
    return result


def monitor_crash_immobility(trace: Trace) -> MonitorResult:
    result = MonitorResult("crash_immobility", True)
    start = {r.id: r.position for r in trace.initial.robots if r.crashed}
    for config in trace.configs:
        result.checked += 1
        for r in config.robots:
            if r.id in start and r.position != start[r.id]:
                result.passed = False
                result.failures.append(f"round {config.round}: robot {r.id} moved")
    return result


# ---------------------------------------------------------------------------
# round complexity


@dataclass
class BoundResult:
    applicable: bool
    passed: bool
    rounds: int
    bound: int | None
    delta_level: int | None
    l_min: int | None
    reason: str = ""


def ceil_sqrt(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def complexity_bound(delta: int, l_min: int, c1=C1, c2=C2) -> mpq:
    return c1 * (delta * delta + ceil_sqrt(max(l_min, 0))) + c2


def start_levels(config: Configuration) -> tuple[int, int]:
    """``(delta_level, l_min)`` of a start; zero for starts off two points."""
    if len(config.occupied()) != 2:
        return 0, 0
    return delta_level(config), lowest_level(config)


def check_complexity_bound(trace: Trace, c1=C1, c2=C2) -> BoundResult:
    init = trace.initial
    if any(r.crashed for r in init.robots):
        return BoundResult(False, False, trace.rounds, None, None, None, "crash scenario")
    if trace.movement.policy != "rigid" or not trace.scheduler.synchronous:
        return BoundResult(False, False, trace.rounds, None, None, None, "needs rigid FSYNC")
    if not trace.verdict.gathered:
        return BoundResult(False, False, trace.rounds, None, None, None, "not gathered")
    dl, lm = start_levels(init)
    bound = complexity_bound(dl, lm, c1, c2)
    return BoundResult(True, trace.rounds <= bound, trace.rounds, int(bound), dl, lm)


# ---------------------------------------------------------------------------
# crash-location detection geometry


@dataclass
class CrashGeometryCase:
    case_id: str
    span_ratio: mpq
    crash_gap_ratio: mpq
    far_gap_ratio: mpq | None
    expected_span: mpq
    expected_crash_gap: mpq
    expected_far: str
    text_everywhere: bool
    gathered_next: bool
    passed: bool

    def as_row(self) -> dict:
        row = asdict(self)
        for k, v in row.items():
            if isinstance(v, type(mpq(0))):
                row[k] = str(v)
        return row


# the line carrying both points, and a frame turning it to the local east
_LINE = (mpq(3, 5), mpq(4, 5))
_EAST = Frame(mpq(3, 5), mpq(-4, 5))
_WEST = Frame(mpq(-3, 5), mpq(4, 5))
_GEOMETRY_LEVEL = 10  # B(2) at unit scale; a quarter unit puts the pair in C1(2)


def _frame_for_move(at_crash: bool, fraction: mpq, phase: str = "B") -> Frame:
    # a robot at the crash point looks along +line; the others look along -line
    if phase == "C1":
        return Frame(_EAST.a / 4, _EAST.b / 4)
    left = fraction == mpq(1, 9)
    if at_crash:
        return _EAST if left else _WEST
    return _WEST if left else _EAST


_N, _T = mpq(1, 9), mpq(1, 10)
# (id, moves at the crash point, moves at the far point, span, crash gap, far gap)
_GEOMETRY_CASES = (
    ("collocated-10/10", (_T,), (_T,), mpq(9, 10), mpq(1, 9), ">1/2"),
    ("collocated-9/10", (_N,), (_T,), mpq(9, 10), mpq(10, 81), ">1/2"),
    ("collocated-10/9", (_T,), (_N,), mpq(8, 9), mpq(9, 80), ">1/2"),
    ("collocated-9/9", (_N,), (_N,), mpq(8, 9), mpq(1, 8), ">1/2"),
    ("collocated-mixed/10", (_T, _N), (_T,), mpq(9, 10), mpq(1, 9), ">1/2"),
    ("collocated-mixed/9", (_T, _N), (_N,), mpq(8, 9), mpq(9, 80), ">1/2"),
    ("collocated-10/mixed", (_T,), (_T, _N), mpq(9, 10), mpq(1, 9), "1/81"),
    ("collocated-9/mixed", (_N,), (_T, _N), mpq(9, 10), mpq(10, 81), "1/81"),
    ("collocated-mixed/mixed", (_T, _N), (_T, _N), mpq(9, 10), mpq(1, 9), "1/81"),
    ("alone-mixed", (), (_T, _N), mpq(9, 10), mpq(80, 81), "1/81"),
    ("alone-B-left/C1", (), (_N, "C1"), mpq(8, 9), mpq(9, 16), "none"),
    ("alone-B-right/C1", (), (_T, "C1"), mpq(9, 10), mpq(10, 18), "none"),
)


def _geometry_config(at_crash: tuple, far: tuple) -> Configuration:
    c, s = _LINE
    d = mpq(17, 16 << _GEOMETRY_LEVEL)
    x = ORIGIN
    y = Point2(scalar(c * d), scalar(s * d))
    robots = [Robot(0, x, _EAST, True)]
    for frac in at_crash:
        robots.append(Robot(len(robots), x, _frame_for_move(True, frac)))
    for frac in far:
        if frac == "C1":
            robots.append(Robot(len(robots), y, _frame_for_move(False, HALF, "C1")))
        else:
            robots.append(Robot(len(robots), y, _frame_for_move(False, frac)))
    return Configuration(tuple(robots))


def _line_param(p: Point2) -> FieldScalar:
    c, s = _LINE
    return p.x * c + p.y * s


def verify_crash_geometry() -> list[CrashGeometryCase]:
    out = []
    decide = get_algorithm("suig")
    for case_id, at_crash, far, span, crash_gap, far_kind in _GEOMETRY_CASES:
        config = _geometry_config(at_crash, far)
        crash = config.robots[0].position
        d = _line_param(config.robots[-1].position)
        trace = run(Scenario("suig", config, FSYNC, RIGID, 8), decide)
        mid = trace.configs[1]
        params = sorted(_line_param(p) for p in mid.occupied())
        d_new = params[-1] - params[0]
        span_obs = d_new / d
        crash_obs = (params[1] - params[0]) / d_new
        far_obs = (params[-1] - params[-2]) / d_new if len(params) > 2 else None
        text_ok = True
        for r in mid.correct():
            phase = classify_view(observe(mid, r))
            anchor = r.frame.apply(crash - r.position)
            if phase.tag != "Text" or phase.anchor != anchor:
                text_ok = False
        gathered_next = (
            trace.verdict.gathered and trace.verdict.point == crash and trace.rounds == 2
        )
        if far_kind == "1/81":
            far_ok = far_obs == scalar(mpq(1, 81))
        elif far_kind == ">1/2":
            far_ok = far_obs is not None and far_obs > HALF
        else:
            far_ok = True
        ok = (
            span_obs == scalar(span)
            and crash_obs == scalar(crash_gap)
            and far_ok
            and text_ok
            and gathered_next
        )
        out.append(
            CrashGeometryCase(
                case_id,
                span_obs.a if span_obs.is_rational else span_obs,
                crash_obs.a if crash_obs.is_rational else crash_obs,
                None if far_obs is None else (far_obs.a if far_obs.is_rational else far_obs),
                span,
                crash_gap,
                far_kind,
                text_ok,
                gathered_next,
                ok,
            )
        )
    return out


# ---------------------------------------------------------------------------
# the semi-synchronous impossibility schedule


@dataclass
class ImpossibilityReport:
    algorithm: str
    horizon: int
    group_size: int
    gathered: bool
    rounds: int
    rule_counts: dict[int, int]
    rules_consistent: bool
    max_gaps: dict[int, int]
    gap_histogram: dict[int, dict[int, int]]
    first_violation: str = ""

    @property
    def passed(self) -> bool:
        return not self.gathered and self.rounds >= self.horizon and self.rules_consistent


def _gap_histogram(trace: Trace) -> dict[int, dict[int, int]]:
    """Per robot, how often each run of consecutive idle rounds occurred."""
    ids = [r.id for r in trace.initial.correct()]
    hist = {i: Counter() for i in ids}
    idle = {i: 0 for i in ids}
    for rec in trace.records:
        for i in ids:
            if i in rec.active:
                if idle[i]:
                    hist[i][idle[i]] += 1
                idle[i] = 0
            else:
                idle[i] += 1
    for i in ids:
        if idle[i]:
            hist[i][idle[i]] += 1
    return {i: dict(sorted(h.items())) for i, h in hist.items()}


def _check_rule(config: Configuration, rec, group_r, group_rp, decide) -> str:
    """Empty string when the recorded rule is the case that actually applied.

    Targets of activated robots are read from the round record; a target is
    recomputed only when the robot sat the round out and its target matters.
    """
    r = config.by_id(group_r[0])
    rp = config.by_id(group_rp[0])
    recorded = {d.robot_id: d.target for d in rec.decisions}

    def target(robot):
        if robot.id in recorded:
            return recorded[robot.id]
        return global_target(config, robot, decide)[2]

    t_r = target(r)
    if t_r == r.position:
        want, who = 1, set(group_r)
    elif t_r != rp.position:
        want, who = 2, set(group_r)
    elif target(rp) != rp.position:
        want, who = 3, set(group_r) | set(group_rp)
    else:
        want, who = 4, set(group_rp)
    active = set(rec.active)
    if rec.rule != want or active != who:
        return f"round {rec.round}: recorded rule {rec.rule} on {sorted(active)}, expected {want} on {sorted(who)}"
    return ""


def impossibility_scenario(algorithm: str, horizon: int, group_size: int = 1) -> Scenario:
    """Two groups sharing one coordinate system, at (0, 0) and (1, 0)."""
    robots = []
    for i in range(2 * group_size):
        where = ORIGIN if i < group_size else Point2(scalar(1), scalar(0))
        robots.append(Robot(i, where))
    scheduler = Scheduler("impossibility", 0, tuple(range(group_size)))
    return Scenario(algorithm, Configuration(tuple(robots)), scheduler, RIGID, horizon)


def demo_impossibility(algorithm: str = "lifted_suir", horizon: int = 10_000, group_size: int = 1) -> ImpossibilityReport:
    scenario = impossibility_scenario(algorithm, horizon, group_size)
    decide = get_algorithm(algorithm)
    trace = run(scenario, decide)
    group_r = list(range(group_size))
    group_rp = list(range(group_size, 2 * group_size))
    violation = ""
    for config, rec in zip(trace.configs, trace.records):
        violation = _check_rule(config, rec, group_r, group_rp, decide)
        if violation:
            break
    return ImpossibilityReport(
        algorithm,
        horizon,
        group_size,
        trace.verdict.gathered,
        trace.rounds,
        dict(sorted(trace.rule_counts().items())),
        not violation,
        trace.activation_gaps(),
        _gap_histogram(trace),
        violation,
    )


# ---------------------------------------------------------------------------
# the distance function of one round


def distance_step_holds(d: mpq, x: mpq, y: mpq, delta: mpq) -> bool:
    return abs(d - x - y) <= d - min(delta, d / 2)


def _travel(rng: random.Random, target: mpq, delta: mpq) -> mpq:
    if target <= delta:
        return target
    lo = delta
    j = rng.randint(0, 1 << 12)
    return lo + (target - lo) * mpq(j, 1 << 12)


def check_distance_step(samples: int = 2000, seed: int = 0) -> MonitorResult:
    """Sample one round of two robots on a line and bound the new distance."""
    rng = random.Random(seed)
    result = MonitorResult("distance_step", True)
    for _ in range(samples):
        d = mpq(rng.randint(1, 1 << 10), rng.randint(1, 1 << 8))
        delta = rng.choice((mpq(1, 10), mpq(1, 3), mpq(2), mpq(rng.randint(1, 64), 16)))
        targets = [rng.choice((d / 2, d)), rng.choice((d / 2, d))]
        if HALF * d not in targets:
            targets[rng.randrange(2)] = d / 2
        crashed = rng.choice((None, 0, 1))
        moves = [mpq(0) if crashed == i else _travel(rng, targets[i], delta) for i in range(2)]
        result.checked += 1
        if not distance_step_holds(d, moves[0], moves[1], delta):
            result.passed = False
            result.failures.append(f"d={d} x={moves[0]} y={moves[1]} delta={delta}")
    return result


# ---------------------------------------------------------------------------
# the one-dimensional lift


@dataclass
class LineStep:
    side: str
    level: int
    fraction: mpq


def simulate_line(
    positions: tuple[mpq, mpq],
    orientations: tuple[int, int],
    scales_sq: tuple[mpq, mpq],
    line_algo: LineAlgorithm = suir_line,
    crashed: tuple[bool, bool] = (False, False),
    max_rounds: int = 64,
) -> tuple[list[tuple[mpq, mpq]], list[dict[int, LineStep]]]:
    """Two robots on the real line, each seeing ``sigma * unit * (other - self)``."""
    pos = list(positions)
    history = [tuple(pos)]
    steps = []
    while pos[0] != pos[1] and len(steps) < max_rounds:
        moves = {}
        record = {}
        for i in (0, 1):
            if crashed[i]:
                continue
            gap = pos[1 - i] - pos[i]
            side = Side.LEFT if gap * orientations[i] > 0 else Side.RIGHT
            d_sq = scalar(scales_sq[i] * gap * gap)
            frac = mpq(line_algo(side, d_sq))
            record[i] = LineStep(side.value, level_of_sq(d_sq), frac)
            moves[i] = pos[i] + frac * gap
        for i, p in moves.items():
            pos[i] = p
        history.append(tuple(pos))
        steps.append(record)
    return history, steps


@dataclass
class LiftCase:
    seed: int
    rounds: int
    passed: bool
    mismatch: str = ""


def check_lift_equivalence(seed: int, crash: bool = False, max_rounds: int = 64) -> LiftCase:
    rng = random.Random(seed)
    c, s = unit_direction(rng)
    direction = Point2(scalar(c), scalar(s))
    origin = Point2(scalar(mpq(rng.randint(-64, 64), 8)), scalar(mpq(rng.randint(-64, 64), 8)))
    params = (mpq(rng.randint(-256, 256), 32), mpq(rng.randint(-256, 256), 32))
    if params[0] == params[1]:
        params = (params[0], params[0] + 1)
    frames = (random_frame(rng, 6), random_frame(rng, 6))
    crashed = (False, False)
    if crash:
        crashed = (True, False) if rng.random() < 0.5 else (False, True)
    robots = tuple(
        Robot(i, origin + direction.scale(params[i]), frames[i], crashed[i]) for i in (0, 1)
    )
    scenario = Scenario("lifted_suir", Configuration(robots), FSYNC, RIGID, max_rounds)
    trace = run(scenario)

    orientations = tuple(1 if f.apply(direction).lex_positive() else -1 for f in frames)
    history, steps = simulate_line(
        params, orientations, tuple(f.scale_sq for f in frames), suir_line, crashed, max_rounds
    )
    projected = [
        tuple((r.position - origin).dot(direction) for r in config.robots) for config in trace.configs
    ]
    if len(projected) != len(history):
        return LiftCase(seed, trace.rounds, False, f"{len(projected)} vs {len(history)} configurations")
    for t, (planar, line) in enumerate(zip(projected, history)):
        if planar != tuple(scalar(v) for v in line):
            return LiftCase(seed, trace.rounds, False, f"positions differ at round {t}")
    for rec, line_rec in zip(trace.records, steps):
        planar = {d.robot_id: (d.side, d.level, mpq(d.fraction)) for d in rec.decisions}
        line = {i: (v.side, v.level, v.fraction) for i, v in line_rec.items()}
        if planar != line:
            return LiftCase(seed, trace.rounds, False, f"decisions differ at round {rec.round}")
    return LiftCase(seed, trace.rounds, True)


# ---------------------------------------------------------------------------
# rendezvous with one shared axis


@dataclass
class AxisReport:
    case_id: str
    gathered: bool
    rounds: int
    checked_rounds: int
    bound_holds: bool
    min_decrease_over_delta: mpq | None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.gathered and self.bound_holds


def _axis_frame(rng: random.Random) -> Frame:
    unit = mpq(rng.randint(1, 8), rng.randint(1, 8))
    # either the identity orientation or the x axis mirrored; y always agrees
    return Frame(unit, 0) if rng.random() < 0.5 else Frame(-unit, 0, True)


def axis_symmetric(seed: int, delta=mpq(1, 10), policy: str = "min_progress") -> AxisReport:
    """Mirror-image start; both robots are stopped after the same progress."""
    rng = random.Random(seed)
    half = mpq(rng.randint(1, 64), 16)
    height = mpq(rng.randint(-32, 32), 8)
    a = Point2(scalar(-half), scalar(height))
    b = Point2(scalar(half), scalar(height))
    robots = (Robot(0, a, _axis_frame(rng)), Robot(1, b, _axis_frame(rng)))
    scenario = Scenario(
        "axis_rdv", Configuration(robots), FSYNC, MovementAdversary(policy, delta, seed), 10_000
    )
    trace = run(scenario)
    # the claimed per-round decrease 2*delta/sqrt(2), squared: 2*delta^2
    claimed_sq = scalar(2 * delta * delta)
    holds = True
    checked = 0
    worst = None
    detail = ""
    for before, after, rec in zip(trace.configs, trace.configs[1:], trace.records):
        p0, p1 = (r.position for r in after.robots)
        short = all(dec.stop != dec.target for dec in rec.decisions)
        if not short or p0.y != p1.y:
            continue
        checked += 1
        d0 = dist_sq(*(r.position for r in before.robots))
        d1 = dist_sq(p0, p1)
        root0, root1 = d0.sqrt(), d1.sqrt()
        if root0 is not None and root1 is not None:
            ratio = (root0 - root1) / delta
            if ratio.is_rational:
                worst = ratio.a if worst is None else min(worst, ratio.a)
        if not _sqrt_gap_at_least(d0, d1, claimed_sq):
            if holds:
                detail = f"round {rec.round}: d^2 {d0} -> {d1}, claimed drop^2 {claimed_sq}"
            holds = False
    return AxisReport(f"symmetric-{seed}", trace.verdict.gathered, trace.rounds, checked, holds, worst, detail)


def axis_asymmetric(seed: int, delta=mpq(1, 3), policy: str = "min_progress") -> AxisReport:
    """Distinct heights: the northern robot must never move."""
    rng = random.Random(seed)
    ys = rng.sample(range(-40, 41), 2)
    a = Point2(scalar(mpq(rng.randint(-40, 40), 8)), scalar(mpq(ys[0], 8)))
    b = Point2(scalar(mpq(rng.randint(-40, 40), 8)), scalar(mpq(ys[1], 8)))
    robots = (Robot(0, a, _axis_frame(rng)), Robot(1, b, _axis_frame(rng)))
    north = 0 if a.y > b.y else 1
    scenario = Scenario(
        "axis_rdv", Configuration(robots), FSYNC, MovementAdversary(policy, delta, seed), 10_000
    )
    trace = run(scenario)
    anchor = robots[north].position
    still = all(c.robots[north].position == anchor for c in trace.configs)
    return AxisReport(
        f"asymmetric-{seed}",
        trace.verdict.gathered,
        trace.rounds,
        trace.rounds,
        still,
        None,
        "" if still else "northern robot moved",
    )


def apex(x: FieldScalar) -> Point2:
    return Point2(x * HALF, abs(x) * SQRT3 * HALF)


# ---------------------------------------------------------------------------
# full report


def _entry(kind: str, name: str, passed: bool, **detail) -> dict:
    return {"kind": kind, "name": name, "passed": bool(passed), "detail": detail}


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def run_verification(
    *,
    horizon: int = 10_000,
    sample_runs: int = 40,
    progress: Callable[[str], None] | None = None,
) -> list[dict]:
    """Every check in one list of ``{kind, name, passed, detail}`` entries."""
    say = progress or (lambda _msg: None)
    entries: list[dict] = []
    say("rendezvous case tables")
    for rep in verify_suir_common() + verify_suir_opposite() + verify_suir_crash():
        entries.append(
            _entry("case", rep.case_id, rep.passed, expected=rep.expected, observed=rep.observed, rounds=rep.rounds)
        )
    say("crash geometry")
    for case in verify_crash_geometry():
        row = case.as_row()
        del row["passed"], row["case_id"]
        entries.append(_entry("crash_geometry", case.case_id, case.passed, **row))
    say("distance lemma")
    lem = check_distance_step()
    entries.append(_entry("lemma", "distance_step", lem.passed, checked=lem.checked, failures=lem.failures[:5]))

    say("contraction monitor")
    from .generators import suig_crash_case, suig_no_crash_case, suir_pair

    bad = []
    checked = 0
    for seed in range(sample_runs):
        policy = ("rigid", "min_progress", "random")[seed % 3]
        delta = (mpq(1, 10), mpq(1, 3), mpq(2))[(seed // 3) % 3]
        scen = suir_pair(seed, policy=policy, delta=delta, crash=seed % 4 == 0)
        mon = monitor_contraction(run(scen))
        checked += mon.checked
        if not mon.passed:
            bad.append(seed)
    entries.append(_entry("monitor", "contraction", not bad, runs=sample_runs, checked=checked, failing_seeds=bad))

    say("gathering monitors")
    for label, maker in (("no_crash", suig_no_crash_case), ("crash", suig_crash_case)):
        failing = {"gathered": [], "level_jump": [], "hull": [], "bound": []}
        for seed in range(sample_runs):
            config = maker(seed)
            trace = run(Scenario("suig", config))
            target_ok = trace.verdict.gathered
            if label == "crash":
                target_ok = target_ok and trace.verdict.point == config.crash_locations()[0]
            if not target_ok:
                failing["gathered"].append(seed)
            if not monitor_level_jump(trace).passed:
                failing["level_jump"].append(seed)
            if not monitor_hull(trace).passed:
                failing["hull"].append(seed)
            if label == "no_crash" and not check_complexity_bound(trace).passed:
                failing["bound"].append(seed)
        for name, seeds in failing.items():
            if label == "crash" and name == "bound":
                continue
            entries.append(_entry("monitor", f"suig_{label}_{name}", not seeds, runs=sample_runs, failing_seeds=seeds))

    say("impossibility schedule")
    for algo, group in (("lifted_suir", 1), ("midpoint", 1), ("lifted_suir", 3)):
        rep = demo_impossibility(algo, horizon, group)
        entries.append(
            _entry(
                "impossibility",
                f"{algo}-x{group}",
                rep.passed,
                gathered=rep.gathered,
                rounds=rep.rounds,
                rule_counts=rep.rule_counts,
                max_gaps=rep.max_gaps,
                violation=rep.first_violation,
            )
        )

    say("lift equivalence")
    lift_bad = [s for s in range(sample_runs) if not check_lift_equivalence(s, crash=s % 5 == 0).passed]
    entries.append(_entry("lift", "lift_equivalence", not lift_bad, runs=sample_runs, failing_seeds=lift_bad))

    say("axis rendezvous")
    for seed in range(3):
        rep = axis_symmetric(seed)
        entries.append(
            _entry(
                "axis",
                rep.case_id,
                rep.passed,
                gathered=rep.gathered,
                checked_rounds=rep.checked_rounds,
                claimed_bound_holds=rep.bound_holds,
                min_decrease_over_delta=rep.min_decrease_over_delta,
                detail=rep.detail,
            )
        )
        rep = axis_asymmetric(seed)
        entries.append(_entry("axis", rep.case_id, rep.passed, gathered=rep.gathered, rounds=rep.rounds))
    return [_jsonable(e) for e in entries]


def format_table(entries: Iterable[dict]) -> str:
    rows = [(e["kind"], e["name"], "PASS" if e["passed"] else "FAIL") for e in entries]
    w0 = max((len(r[0]) for r in rows), default=4)
    w1 = max((len(r[1]) for r in rows), default=4)
    lines = [f"{'kind':<{w0}}  {'check':<{w1}}  result"]
    lines += [f"{a:<{w0}}  {b:<{w1}}  {c}" for a, b, c in rows]
    return "\n".join(lines)
