import json

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from conftest import frames, rational_points
from gathersim.engine import MovementAdversary, Scheduler
from gathersim.field import SQRT3, Point2, scalar
from gathersim.generators import suig_no_crash_case, suir_pair
from gathersim.model import Configuration, Robot
from gathersim.scenario import Scenario, ScenarioError, dump_scenario, parse_scenario

BASE = {
    "algorithm": "suig",
    "robots": [{"position": ["0", "0"]}, {"position": ["1", "0"]}],
}


def doc(**changes):
    d = json.loads(json.dumps(BASE))
    d.update(changes)
    return json.dumps(d)


def test_minimal_document_defaults():
    s = parse_scenario(doc())
    assert s.algorithm == "suig"
    assert s.scheduler.kind == "fsync" and s.movement.policy == "rigid"
    assert s.configuration.robots[1].position == Point2.of(1, 0)
    assert s.max_rounds == 10_000


def test_irrational_positions_parse():
    s = parse_scenario(doc(robots=[{"position": ["0", "0"]}, {"position": ["1/2", "1/2*sqrt3"]}]))
    assert s.configuration.robots[1].position == Point2(scalar(mpq(1, 2)), SQRT3 / 2)


@pytest.mark.parametrize(
    "changes,where",
    [
        ({"robots": [{"position": ["0", "0"], "crashed": True}, {"position": ["1", "0"], "crashed": True}]}, "single crashed location"),
        ({"movement": {"policy": "min_progress", "delta": "0"}}, "movement"),
        ({"robots": [{"position": ["0", "0"], "frame": {"a": "0", "b": "0"}}]}, "robots.0.frame"),
        ({"extra": 1}, "extra"),
        ({"robots": [{"position": [0.5, "0"]}]}, "robots.0.position.0"),
        ({"algorithm": "teleport"}, "algorithm"),
        ({"robots": []}, "robots"),
        ({"max_rounds": 0}, "max_rounds"),
        ({"scheduler": {"kind": "async"}}, "scheduler.kind"),
    ],
)
def test_rejections_name_the_field(changes, where):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(doc(**changes))
    assert any(where in line for line in err.value.errors)


def test_rejects_bad_json():
    with pytest.raises(ScenarioError):
        parse_scenario("{not json")
    with pytest.raises(ScenarioError):
        parse_scenario("[1, 2]")


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.tuples(rational_points(), frames()), min_size=1, max_size=4),
    st.sampled_from(["suig", "suir", "lifted_suir", "axis_rdv"]),
    st.sampled_from(["fsync", "round_robin", "random"]),
    st.integers(0, 1000),
)
def test_round_trip(robots, algo, kind, seed):
    config = Configuration(tuple(Robot(i, p, f) for i, (p, f) in enumerate(robots)))
    s = Scenario(algo, config, Scheduler(kind, seed), MovementAdversary("random", mpq(1, 3), seed))
    back = parse_scenario(dump_scenario(s))
    assert back == s
    assert back.digest() == s.digest()


def test_digest_tracks_content():
    a = Scenario("suig", suig_no_crash_case(1))
    assert a.digest() == Scenario("suig", suig_no_crash_case(1)).digest()
    assert a.digest() != Scenario("suig", suig_no_crash_case(2)).digest()
    assert a.digest() != a.with_overrides(seed=7).digest()
    # output paths do not change what is simulated
    assert a.digest() == Scenario("suig", a.configuration, outputs={"trace": "x.jsonl"}).digest()


def test_generated_scenarios_round_trip():
    s = suir_pair(3, policy="min_progress", delta=mpq(1, 10), crash=True)
    assert parse_scenario(dump_scenario(s)) == s
