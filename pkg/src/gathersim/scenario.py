"""Scenario documents: JSON in, validated :class:`Scenario` out, and back."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Annotated, Literal, Optional, Union

from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    StrictBool,
    StrictInt,
    StrictStr,
    ValidationError,
    model_validator,
)

from .algorithms import ALGORITHMS
from .engine import FSYNC, RIGID, MOVEMENT_POLICIES, SCHEDULER_KINDS, MovementAdversary, Scheduler
from .field import FieldScalar, Point2, scalar, to_rational
from .model import Configuration, Frame, Robot

DEFAULT_MAX_ROUNDS = 10_000
DEFAULT_MAX_BITS = 1 << 16


class ScenarioError(ValueError):
    """Scenario document failed validation; ``errors`` holds path-tagged messages."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass(frozen=True)
class Scenario:
    algorithm: str
    configuration: Configuration
    scheduler: Scheduler = FSYNC
    movement: MovementAdversary = RIGID
    max_rounds: int = DEFAULT_MAX_ROUNDS
    max_bits: int = DEFAULT_MAX_BITS
    outputs: dict = field(default_factory=dict, compare=False)

    def violations(self) -> list[str]:
        out = list(self.configuration.violations())
        if self.algorithm not in ALGORITHMS:
            out.append(f"unknown algorithm {self.algorithm!r}")
        if self.max_rounds < 1:
            out.append("max_rounds must be at least 1")
        return out

    def digest(self) -> str:
        doc = serialize_scenario(self)
        doc.pop("outputs", None)
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_overrides(self, *, seed: int | None = None, max_rounds: int | None = None) -> Scenario:
        from dataclasses import replace

        s = self
        if seed is not None:
            s = replace(
                s,
                scheduler=replace(s.scheduler, seed=seed),
                movement=replace(s.movement, seed=seed),
            )
        if max_rounds is not None:
            s = replace(s, max_rounds=max_rounds)
        return s


# ---------------------------------------------------------------------------
# document schema


def _exact_scalar(value: Union[int, str]) -> str:
    return str(scalar(value) if isinstance(value, str) else scalar(int(value)))


def _exact_rational(value: Union[int, str]) -> str:
    return str(to_rational(value))


ExactScalar = Annotated[Union[StrictInt, StrictStr], AfterValidator(_exact_scalar)]
ExactRational = Annotated[Union[StrictInt, StrictStr], AfterValidator(_exact_rational)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FrameDoc(_Strict):
    a: ExactRational = "1"
    b: ExactRational = "0"
    reflect: StrictBool = False

    @model_validator(mode="after")
    def _invertible(self):
        if not to_rational(self.a) and not to_rational(self.b):
            raise ValueError("frame is not invertible (a = b = 0)")
        return self


class RobotDoc(_Strict):
    position: tuple[ExactScalar, ExactScalar]
    frame: FrameDoc = Field(default_factory=FrameDoc)
    crashed: StrictBool = False


class SchedulerDoc(_Strict):
    kind: Literal[SCHEDULER_KINDS] = "fsync"  # type: ignore[valid-type]
    seed: StrictInt = 0
    designated: list[StrictInt] = Field(default_factory=lambda: [0])


class MovementDoc(_Strict):
    policy: Literal[MOVEMENT_POLICIES] = "rigid"  # type: ignore[valid-type]
    delta: ExactRational = "1"
    seed: StrictInt = 0
    script: list[list[Optional[ExactRational]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _positive_delta(self):
        if to_rational(self.delta) <= 0:
            raise ValueError("delta must be a positive distance")
        return self


class OutputsDoc(_Strict):
    trace: Optional[StrictStr] = None
    summary: Optional[StrictStr] = None


class ScenarioDoc(_Strict):
    algorithm: Literal[tuple(ALGORITHMS)]  # type: ignore[valid-type]
    robots: list[RobotDoc] = Field(min_length=1)
    scheduler: SchedulerDoc = Field(default_factory=SchedulerDoc)
    movement: MovementDoc = Field(default_factory=MovementDoc)
    max_rounds: StrictInt = Field(default=DEFAULT_MAX_ROUNDS, ge=1)
    max_bits: StrictInt = Field(default=DEFAULT_MAX_BITS, ge=64)
    outputs: OutputsDoc = Field(default_factory=OutputsDoc)

    @model_validator(mode="after")
    def _single_crash_location(self):
        spots = {tuple(r.position) for r in self.robots if r.crashed}
        if len(spots) > 1:
            raise ValueError(
                f"robots: single crashed location required, found {len(spots)} distinct crashed positions"
            )
        return self


def _format_errors(exc: ValidationError) -> list[str]:
    out = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        msg = err["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        out.append(f"{path}: {msg}")
    return out


def scenario_from_dict(doc: dict) -> Scenario:
    try:
        model = ScenarioDoc.model_validate(doc)
    except ValidationError as exc:
        raise ScenarioError(_format_errors(exc)) from None
    robots = tuple(
        Robot(
            i,
            Point2(scalar(r.position[0]), scalar(r.position[1])),
            Frame(to_rational(r.frame.a), to_rational(r.frame.b), r.frame.reflect),
            r.crashed,
        )
        for i, r in enumerate(model.robots)
    )
    mv = model.movement
    movement = MovementAdversary(
        mv.policy,
        to_rational(mv.delta),
        mv.seed,
        tuple(tuple(None if f is None else to_rational(f) for f in row) for row in mv.script),
    )
    sch = model.scheduler
    outputs = {k: v for k, v in model.outputs.model_dump().items() if v is not None}
    return Scenario(
        model.algorithm,
        Configuration(robots),
        Scheduler(sch.kind, sch.seed, tuple(sch.designated)),
        movement,
        model.max_rounds,
        model.max_bits,
        outputs,
    )


def parse_scenario(text: str | bytes) -> Scenario:
    """Parse and validate a UTF-8 JSON scenario document."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"<root>: invalid JSON ({exc.msg} at line {exc.lineno})"]) from None
    if not isinstance(doc, dict):
        raise ScenarioError(["<root>: a scenario must be a JSON object"])
    return scenario_from_dict(doc)


def _frame_doc(frame: Frame) -> dict:
    return {"a": str(frame.a), "b": str(frame.b), "reflect": frame.reflect}


def serialize_scenario(scenario: Scenario) -> dict:
    mv = scenario.movement
    doc = {
        "algorithm": scenario.algorithm,
        "robots": [
            {
                "position": r.position.to_text(),
                "frame": _frame_doc(r.frame),
                "crashed": r.crashed,
            }
            for r in scenario.configuration.robots
        ],
        "scheduler": {
            "kind": scenario.scheduler.kind,
            "seed": scenario.scheduler.seed,
            "designated": list(scenario.scheduler.designated),
        },
        "movement": {
            "policy": mv.policy,
            "delta": str(mv.delta),
            "seed": mv.seed,
            "script": [[None if f is None else str(f) for f in row] for row in mv.script],
        },
        "max_rounds": scenario.max_rounds,
        "max_bits": scenario.max_bits,
    }
    if scenario.outputs:
        doc["outputs"] = dict(scenario.outputs)
    return doc


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(serialize_scenario(scenario), indent=2) + "\n"


