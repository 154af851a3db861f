"""Trace export: JSONL (one record per line) and a per-round CSV summary.

JSONL records, in order:

* ``{"type": "header", ...}`` scenario digest, algorithm, scheduler, movement
  and the initial robots;
* one ``{"type": "round", ...}`` per executed round with the activation set,
  the impossibility rule (or null), every active robot's decision and the
  occupied points afterwards;
* a final ``{"type": "verdict", ...}``.

Every scalar is written in the exact text form (``"3/8"``,
``"1/2+1/2*sqrt3"``) so a trace can be compared byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterator

from .engine import Trace
from .field import smallest_enclosing_circle
from .model import Configuration, robot_levels

SUMMARY_COLUMNS = ("round", "occupied", "sec_diameter_sq", "min_level", "max_level", "phases")


def _text(value) -> str | None:
    return None if value is None else str(value)


def trace_records(trace: Trace) -> Iterator[dict]:
    init = trace.initial
    yield {
        "type": "header",
        "digest": trace.digest,
        "algorithm": trace.algorithm,
        "scheduler": {
            "kind": trace.scheduler.kind,
            "seed": trace.scheduler.seed,
            "designated": list(trace.scheduler.designated),
        },
        "movement": {
            "policy": trace.movement.policy,
            "delta": str(trace.movement.delta),
            "seed": trace.movement.seed,
        },
        "robots": [
            {"id": r.id, "position": r.position.to_text(), "crashed": r.crashed}
            for r in init.robots
        ],
    }
    for rec, after in zip(trace.records, trace.configs[1:]):
        yield {
            "type": "round",
            "round": rec.round,
            "active": list(rec.active),
            "rule": rec.rule,
            "decisions": [
                {
                    "robot": d.robot_id,
                    "view_size": d.view_size,
                    "phase": d.phase,
                    "side": d.side,
                    "level": d.level,
                    "fraction": _text(d.fraction),
                    "command": d.command.to_text(),
                    "target": d.target.to_text(),
                    "stop": d.stop.to_text(),
                }
                for d in rec.decisions
            ],
            "occupied": [p.to_text() for p in after.occupied()],
        }
    v = trace.verdict
    yield {
        "type": "verdict",
        "kind": v.kind,
        "round": v.round,
        "point": None if v.point is None else v.point.to_text(),
    }


def trace_jsonl(trace: Trace) -> str:
    return "".join(json.dumps(rec, separators=(",", ":")) + "\n" for rec in trace_records(trace))


def _levels(config: Configuration) -> tuple[int | None, int | None]:
    if len(config.occupied()) != 2:
        return None, None
    levels = robot_levels(config)
    if not levels:
        return None, None
    return min(levels), max(levels)


def summary_rows(trace: Trace) -> Iterator[dict]:
    for t, config in enumerate(trace.configs):
        occupied = config.occupied()
        sec = smallest_enclosing_circle(occupied)
        lo, hi = _levels(config)
        phases = ""
        if t < len(trace.records):
            phases = "|".join(sorted({d.phase for d in trace.records[t].decisions if d.phase}))
        yield {
            "round": config.round,
            "occupied": len(occupied),
            "sec_diameter_sq": str(sec.radius_sq * 4),
            "min_level": "" if lo is None else lo,
            "max_level": "" if hi is None else hi,
            "phases": phases,
        }


def summary_csv(trace: Trace) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(summary_rows(trace))
    return buf.getvalue()


def write_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_jsonl(trace))


def write_summary(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(summary_csv(trace))
