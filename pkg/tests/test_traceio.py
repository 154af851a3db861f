import csv
import io
import json

from gathersim.engine import Scheduler, run
from gathersim.field import Point2
from gathersim.generators import suig_no_crash_case, suir_pair
from gathersim.model import IDENTITY, make_configuration
from gathersim.scenario import Scenario
from gathersim.traceio import SUMMARY_COLUMNS, summary_csv, trace_jsonl


def _pair_trace():
    config = make_configuration([(Point2.of(0, 0), IDENTITY), (Point2.of(1, 0), IDENTITY)])
    return run(Scenario("suig", config))


def test_jsonl_layout():
    lines = trace_jsonl(_pair_trace()).splitlines()
    recs = [json.loads(line) for line in lines]
    assert [r["type"] for r in recs] == ["header", "round", "verdict"]
    head, rnd, verdict = recs
    assert head["algorithm"] == "suig" and len(head["robots"]) == 2
    assert rnd["active"] == [0, 1] and rnd["rule"] is None
    d = rnd["decisions"][0]
    assert d["phase"] == "A(0)" and d["fraction"] == "1/2" and d["stop"] == ["1/2", "0"]
    assert rnd["occupied"] == [["1/2", "0"]]
    assert verdict == {"type": "verdict", "kind": "gathered", "round": 1, "point": ["1/2", "0"]}


def test_summary_columns():
    rows = list(csv.DictReader(io.StringIO(summary_csv(_pair_trace()))))
    assert tuple(rows[0]) == SUMMARY_COLUMNS
    assert rows[0]["sec_diameter_sq"] == "1" and rows[0]["min_level"] == "0"
    assert rows[0]["phases"] == "A(0)"
    assert rows[-1]["occupied"] == "1" and rows[-1]["min_level"] == ""


def test_outputs_are_byte_stable():
    s = suir_pair(5, policy="random")
    assert trace_jsonl(run(s)) == trace_jsonl(run(s))
    s = Scenario("suig", suig_no_crash_case(9), Scheduler("random", 9))
    assert summary_csv(run(s)) == summary_csv(run(s))


def test_impossibility_rounds_record_the_rule():
    config = make_configuration([(Point2.of(0, 0), IDENTITY), (Point2.of(1, 0), IDENTITY)])
    trace = run(Scenario("lifted_suir", config, Scheduler("impossibility"), max_rounds=4))
    rules = [json.loads(x)["rule"] for x in trace_jsonl(trace).splitlines()[1:-1]]
    assert all(r in (1, 2, 3, 4) for r in rules)
