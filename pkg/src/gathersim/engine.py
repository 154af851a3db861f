"""Round execution: schedulers, the movement adversary, crashes, traces."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Sequence

from gmpy2 import mpq

from .algorithms import MoveCommand, get_algorithm
from .field import FieldScalar, Point2, lerp, scalar, to_rational
from .model import Configuration, LocalView, Robot

if TYPE_CHECKING:
    from .scenario import Scenario

Decide = Callable[[LocalView], MoveCommand]

MOVEMENT_POLICIES = ("rigid", "min_progress", "random", "scripted")
SCHEDULER_KINDS = ("fsync", "round_robin", "random", "impossibility")

#: denominator exponent for random stop fractions
RANDOM_STOP_BITS = 16
#: precision of the dyadic fallback when a travel length leaves the field
MIN_PROGRESS_BITS = 64


class CoefficientGrowthError(RuntimeError):
    """Raised when exact coordinates exceed the scenario's bit-length cap."""


@dataclass(frozen=True)
class MovementAdversary:
    """Who decides where a moving robot stops.

    A commanded segment of length ``L`` is travelled in full when
    ``L <= delta``; otherwise the robot covers some ``s`` in ``[delta, L]``.
    ``script[t][i]`` is the stop fraction for robot ``i`` in round ``t + 1``
    (``None`` or a missing entry means the full segment).
    """

    policy: str = "rigid"
    delta: mpq = mpq(1)
    seed: int = 0
    script: tuple[tuple[mpq | None, ...], ...] = ()

    def __post_init__(self):
        if self.policy not in MOVEMENT_POLICIES:
            raise ValueError(f"unknown movement policy {self.policy!r}")
        object.__setattr__(self, "delta", to_rational(self.delta))
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        object.__setattr__(
            self,
            "script",
            tuple(tuple(None if f is None else to_rational(f) for f in row) for row in self.script),
        )


RIGID = MovementAdversary()


def _min_dyadic(delta_sq: mpq, length_sq: FieldScalar, bits: int) -> mpq:
    """Smallest ``j / 2**bits`` whose share of the segment is at least delta."""
    scale = mpq(1 << (2 * bits))
    target = delta_sq * scale
    lo, hi = 0, 1 << bits
    while lo < hi:
        mid = (lo + hi) // 2
        if length_sq * (mid * mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    return mpq(lo, 1 << bits)


def resolve_move(
    start: Point2,
    target: Point2,
    adversary: MovementAdversary = RIGID,
    rng: random.Random | None = None,
    round_index: int = 0,
    robot_index: int = 0,
) -> Point2:
    """Where a robot moving from ``start`` toward ``target`` actually stops."""
    if adversary.policy == "rigid":
        return target
    length_sq = (target - start).norm_sq()
    if not length_sq:
        return target
    delta_sq = adversary.delta * adversary.delta
    if length_sq <= delta_sq:
        return target
    policy = adversary.policy
    if policy == "min_progress":
        length = length_sq.sqrt()
        if length is not None:
            t = adversary.delta / length
        else:
            t = _min_dyadic(delta_sq, length_sq, MIN_PROGRESS_BITS)
    elif policy == "random":
        if rng is None:
            raise ValueError("the random movement policy needs an rng")
        t_min = _min_dyadic(delta_sq, length_sq, RANDOM_STOP_BITS)
        denom = 1 << RANDOM_STOP_BITS
        j = rng.randint(int(t_min * denom), denom)
        t = mpq(j, denom)
    else:
        t = None
        script = adversary.script
        if 0 <= round_index - 1 < len(script):
            row = script[round_index - 1]
            if robot_index < len(row):
                t = row[robot_index]
        if t is None:
            return target
        if t > 1 or length_sq * (t * t) < delta_sq:
            raise ValueError(
                f"scripted stop fraction {t} in round {round_index} for robot "
                f"{robot_index} violates the minimum travel delta"
            )
    return lerp(start, target, t)


# ---------------------------------------------------------------------------
# schedulers


@dataclass(frozen=True)
class Scheduler:
    """Activation policy.

    ``designated`` names the robot ids acting as ``r`` for the impossibility
    adversary; every other correct robot acts as ``r'``.
    """

    kind: str = "fsync"
    seed: int = 0
    designated: tuple[int, ...] = (0,)

    def __post_init__(self):
        if self.kind not in SCHEDULER_KINDS:
            raise ValueError(f"unknown scheduler kind {self.kind!r}")
        object.__setattr__(self, "designated", tuple(self.designated))

    @property
    def synchronous(self) -> bool:
        return self.kind == "fsync"


FSYNC = Scheduler()


@dataclass(frozen=True)
class ImpossibilityChoice:
    activate_r: bool
    activate_r_prime: bool
    rule: int


def impossibility_schedule(
    r_position: Point2,
    r_target: Point2,
    r_prime_position: Point2,
    r_prime_target: Point2,
) -> ImpossibilityChoice:
    """Pick who moves so that the two robots never meet.

    1. ``r`` would stay idle: activate only ``r``.
    2. ``r`` would move somewhere other than ``r'``: activate only ``r``.
    3. ``r`` would move onto ``r'`` while ``r'`` would move: activate both.
    4. otherwise (``r'`` would stay idle): activate only ``r'``.
    """
    if r_target == r_position:
        return ImpossibilityChoice(True, False, 1)
    if r_target != r_prime_position:
        return ImpossibilityChoice(True, False, 2)
    if r_prime_target != r_prime_position:
        return ImpossibilityChoice(True, True, 3)
    return ImpossibilityChoice(False, True, 4)


def global_target(config: Configuration, robot: Robot, decide: Decide, occupied=None) -> tuple[LocalView, MoveCommand, Point2]:
    view = _observe(robot, occupied if occupied is not None else config.occupied())
    cmd = decide(view)
    return view, cmd, robot.position + robot.frame.unapply(cmd.destination)


def _observe(robot: Robot, occupied: Sequence[Point2]) -> LocalView:
    here = robot.position
    apply = robot.frame.apply
    return LocalView(tuple(apply(p - here) for p in occupied))


def select_active(
    scheduler: Scheduler,
    config: Configuration,
    decide: Decide,
    rng: random.Random,
    cache: dict | None = None,
) -> tuple[frozenset[int], int | None]:
    correct = sorted(r.id for r in config.correct())
    if not correct:
        return frozenset(), None
    kind = scheduler.kind
    if kind == "fsync":
        return frozenset(correct), None
    if kind == "round_robin":
        return frozenset({correct[config.round % len(correct)]}), None
    if kind == "random":
        while True:
            chosen = frozenset(i for i in correct if rng.random() < 0.5)
            if chosen:
                return chosen, None
    # impossibility adversary over the two groups r and r'
    group_r = [i for i in correct if i in scheduler.designated]
    group_rp = [i for i in correct if i not in scheduler.designated]
    if not group_r or not group_rp:
        raise ValueError("the impossibility scheduler needs two correct groups")
    occupied = config.occupied()
    rep_r = config.by_id(group_r[0])
    rep_rp = config.by_id(group_rp[0])
    cache = {} if cache is None else cache
    targets = []
    for rep in (rep_r, rep_rp):
        key = (rep.position, rep.frame)
        if key not in cache:
            cache[key] = global_target(config, rep, decide, occupied)
        targets.append(cache[key][2])
    t_r, t_rp = targets
    choice = impossibility_schedule(rep_r.position, t_r, rep_rp.position, t_rp)
    active = set()
    if choice.activate_r:
        active.update(group_r)
    if choice.activate_r_prime:
        active.update(group_rp)
    return frozenset(active), choice.rule


# ---------------------------------------------------------------------------
# rounds and traces


@dataclass(frozen=True)
class RobotDecision:
    robot_id: int
    view_size: int
    phase: str | None
    side: str | None
    level: int | None
    fraction: object
    command: Point2
    target: Point2
    stop: Point2


@dataclass(frozen=True)
class RoundRecord:
    round: int
    active: tuple[int, ...]
    rule: int | None
    decisions: tuple[RobotDecision, ...]


@dataclass(frozen=True)
class Verdict:
    kind: str  # "gathered" or "round_cap"
    round: int
    point: Point2 | None = None

    @property
    def gathered(self) -> bool:
        return self.kind == "gathered"

    def __str__(self) -> str:
        if self.gathered:
            return f"Gathered({self.point.x}, {self.point.y}) at round {self.round}"
        return f"RoundCapReached at round {self.round}"


@dataclass
class Trace:
    digest: str
    algorithm: str
    scheduler: Scheduler
    movement: MovementAdversary
    configs: list[Configuration] = field(default_factory=list)
    records: list[RoundRecord] = field(default_factory=list)
    verdict: Verdict | None = None

    @property
    def initial(self) -> Configuration:
        return self.configs[0]

    @property
    def final(self) -> Configuration:
        return self.configs[-1]

    @property
    def rounds(self) -> int:
        return len(self.records)

    def activation_gaps(self) -> dict[int, int]:
        """Longest stretch of rounds each correct robot went unactivated."""
        ids = [r.id for r in self.initial.correct()]
        last = {i: 0 for i in ids}
        worst = {i: 0 for i in ids}
        for rec in self.records:
            for i in rec.active:
                worst[i] = max(worst[i], rec.round - last[i] - 1)
                last[i] = rec.round
        for i in ids:
            worst[i] = max(worst[i], self.rounds - last[i])
        return worst

    def rule_counts(self) -> Counter:
        return Counter(rec.rule for rec in self.records if rec.rule is not None)


def step(
    config: Configuration,
    decide: Decide,
    scheduler: Scheduler = FSYNC,
    adversary: MovementAdversary = RIGID,
    rng: random.Random | None = None,
    move_rng: random.Random | None = None,
) -> tuple[Configuration, RoundRecord]:
    """One Look-Compute-Move round for every activated correct robot."""
    rng = rng if rng is not None else random.Random(scheduler.seed)
    move_rng = move_rng if move_rng is not None else random.Random(adversary.seed)
    cache: dict[tuple, tuple] = {}
    active, rule = select_active(scheduler, config, decide, rng, cache)
    if not active and config.correct():
        raise ValueError("scheduler activated no robot")
    occupied = config.occupied()
    round_index = config.round + 1
    decisions = []
    moves: dict[int, Point2] = {}
    for index, robot in enumerate(config.robots):
        if robot.crashed or robot.id not in active:
            continue
        key = (robot.position, robot.frame)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = global_target(config, robot, decide, occupied)
        view, cmd, target = hit
        stop = resolve_move(robot.position, target, adversary, move_rng, round_index, index)
        moves[robot.id] = stop
        decisions.append(
            RobotDecision(
                robot.id,
                len(view),
                None if cmd.phase is None else str(cmd.phase),
                None if cmd.side is None else cmd.side.value,
                cmd.level,
                cmd.fraction,
                cmd.destination,
                target,
                stop,
            )
        )
    record = RoundRecord(round_index, tuple(sorted(active)), rule, tuple(decisions))
    return config.moved(moves), record


def max_bits(config: Configuration) -> int:
    return max(max(r.position.x.bit_length(), r.position.y.bit_length()) for r in config.robots)


def run(scenario: Scenario, decide: Decide | None = None) -> Trace:
    """Iterate rounds until the robots occupy one point or the cap is hit."""
    problems = scenario.violations()
    if problems:
        raise ValueError("invalid scenario: " + "; ".join(problems))
    decide = decide or get_algorithm(scenario.algorithm)
    config = scenario.configuration
    trace = Trace(scenario.digest(), scenario.algorithm, scenario.scheduler, scenario.movement)
    trace.configs.append(config)
    rng = random.Random(scenario.scheduler.seed)
    move_rng = random.Random(scenario.movement.seed)
    while not config.is_gathered() and config.round < scenario.max_rounds:
        config, record = step(config, decide, scenario.scheduler, scenario.movement, rng, move_rng)
        bits = max_bits(config)
        if bits > scenario.max_bits:
            raise CoefficientGrowthError(
                f"round {config.round}: coordinates need {bits} bits, "
                f"over the cap of {scenario.max_bits}"
            )
        trace.configs.append(config)
        trace.records.append(record)
    if config.is_gathered():
        trace.verdict = Verdict("gathered", config.round, config.robots[0].position)
    else:
        trace.verdict = Verdict("round_cap", config.round)
    return trace


