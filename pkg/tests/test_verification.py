import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from gathersim.algorithms import lift_line_algorithm, stay_line
from gathersim.engine import FSYNC, RIGID, MovementAdversary, Scheduler, Trace, run
from gathersim.field import SQRT3, Point2, scalar
from gathersim.generators import suig_crash_case, suig_no_crash_case, suir_pair
from gathersim.model import IDENTITY, Configuration, Frame, Robot, make_configuration
from gathersim.scenario import Scenario
from gathersim.verification import (
    C1,
    C2,
    _sqrt_gap_at_least,
    apex,
    axis_asymmetric,
    axis_symmetric,
    check_complexity_bound,
    check_distance_step,
    complexity_bound,
    demo_impossibility,
    format_table,
    distance_step_holds,
    monitor_contraction,
    monitor_crash_immobility,
    monitor_hull,
    monitor_level_jump,
    pair_class,
    run_verification,
    verify_crash_geometry,
    verify_suir_common,
    verify_suir_crash,
    verify_suir_opposite,
)


def P(x, y):
    return Point2.of(x, y)


def _pair(algo="suir", decide=None, **kw):
    config = make_configuration([(P(0, 0), IDENTITY), (P(4, 0), IDENTITY)])
    return run(Scenario(algo, config, **kw), decide)


# --- exact helpers ------------------------------------------------------------


@pytest.mark.parametrize(
    "a,b,c,want", [(25, 9, 4, True), (25, 9, 5, False), (4, 0, 4, True), (2, 1, mpq(1, 10), True)]
)
def test_sqrt_gap_examples(a, b, c, want):
    assert _sqrt_gap_at_least(scalar(a), scalar(b), scalar(c)) is want


@given(st.integers(0, 400), st.integers(0, 400), st.integers(0, 400))
def test_sqrt_gap_matches_integer_roots(x, y, z):
    assert _sqrt_gap_at_least(scalar(x * x), scalar(y * y), scalar(z * z)) == (x - y >= z)


def test_distance_step_examples():
    d = mpq(4)
    assert distance_step_holds(d, mpq(2), mpq(2), mpq(1))
    assert distance_step_holds(d, mpq(1), mpq(1), mpq(1))
    assert not distance_step_holds(d, mpq(1, 2), mpq(1, 4), mpq(1))
    assert check_distance_step(samples=300, seed=5).passed


def test_complexity_bound_examples():
    assert (C1, C2) == (4, 8)
    assert complexity_bound(3, 24) == 64
    assert complexity_bound(0, 0) == 8
    assert complexity_bound(1, 25) == 4 * 6 + 8


def test_bound_applicability():
    crash = run(Scenario("suig", suig_crash_case(0)))
    assert not check_complexity_bound(crash).applicable
    moved = run(Scenario("suig", suig_no_crash_case(0), movement=MovementAdversary("min_progress", mpq(1, 10))))
    assert not check_complexity_bound(moved).applicable
    res = check_complexity_bound(run(Scenario("suig", suig_no_crash_case(0))))
    assert res.applicable and res.passed and res.rounds <= res.bound


# --- monitors and their negative controls ---------------------------------------


def test_contraction_monitor():
    assert monitor_contraction(_pair()).passed
    frozen = _pair(decide=lift_line_algorithm(stay_line), max_rounds=5)
    res = monitor_contraction(frozen)
    assert not res.passed and res.checked == 4


def test_level_jump_monitor():
    def nearly_meet(side, d_sq):
        return mpq(1, 2) - mpq(1, 1 << 12)

    assert monitor_level_jump(_pair()).passed
    jumpy = _pair(decide=lift_line_algorithm(nearly_meet), max_rounds=2)
    res = monitor_level_jump(jumpy)
    assert not res.passed and res.detail["max_jump"] > 7


def test_hull_monitor():
    assert monitor_hull(_pair()).passed
    # the apex of the shared-axis algorithm lies off the segment
    assert not monitor_hull(_pair("axis_rdv")).passed


def test_crash_immobility_monitor():
    before = Configuration((Robot(0, P(0, 0), crashed=True), Robot(1, P(1, 0))))
    after = Configuration((Robot(0, P(1, 0), crashed=True), Robot(1, P(1, 0))), 1)
    fake = Trace("x", "suig", FSYNC, RIGID, [before, after])
    assert not monitor_crash_immobility(fake).passed
    real = run(Scenario("suig", suig_crash_case(3)))
    assert monitor_crash_immobility(real).passed


# --- case tables and crash geometry --------------------------------------------


def test_case_tables():
    common, opposite, crash = verify_suir_common(), verify_suir_opposite(), verify_suir_crash()
    assert (len(common), len(opposite), len(crash)) == (16, 20, 8)
    assert all(r.passed for r in common + opposite + crash)
    assert {r.observed for r in common} >= {"gathered in 1", "(2,1)", "(0,0)"}


def test_pair_class_examples():
    config = make_configuration([(P(0, 0), IDENTITY), (P(1, 0), IDENTITY)])
    assert pair_class(config) == ("common", (0, 0))
    config = make_configuration([(P(0, 0), IDENTITY), (P(1, 0), Frame(-1, 0))])
    assert pair_class(config) == ("L", (0, 0))


def test_crash_geometry():
    cases = verify_crash_geometry()
    assert len(cases) == 12 and all(c.passed for c in cases)
    gaps = {c.crash_gap_ratio for c in cases}
    assert {mpq(1, 9), mpq(9, 80), mpq(10, 81), mpq(1, 8), mpq(80, 81), mpq(9, 16), mpq(10, 18)} <= gaps
    assert {c.span_ratio for c in cases} == {mpq(9, 10), mpq(8, 9)}


# --- impossibility, lift, shared axis --------------------------------------------


@pytest.mark.parametrize("algo,group", [("lifted_suir", 1), ("midpoint", 1), ("lifted_suir", 2)])
def test_impossibility_short(algo, group):
    rep = demo_impossibility(algo, 300, group)
    assert rep.passed and not rep.gathered and rep.rounds == 300
    assert set(rep.rule_counts) <= {1, 2, 3, 4}


def test_impossibility_gap_report():
    rep = demo_impossibility("lifted_suir", 400)
    assert rep.max_gaps == {0: 0, 1: 3}
    assert rep.rule_counts == {2: 201, 3: 199}
    # the midpoint target is never the other robot, so rule 2 fires forever and r' starves
    rep = demo_impossibility("midpoint", 400)
    assert rep.rule_counts == {2: 400} and rep.max_gaps[1] == 400


def test_apex():
    assert apex(scalar(2)) == Point2(scalar(1), SQRT3)
    assert apex(scalar(-2)) == Point2(scalar(-1), SQRT3)


def test_axis_reports():
    sym = axis_symmetric(0)
    assert sym.gathered and sym.checked_rounds > 0
    # each robot climbs at sixty degrees, so the pair closes by exactly delta per round
    assert sym.min_decrease_over_delta == 1
    assert not sym.bound_holds
    asym = axis_asymmetric(0)
    assert asym.passed


def test_run_verification_small():
    entries = run_verification(horizon=50, sample_runs=3)
    kinds = {e["kind"] for e in entries}
    assert kinds == {"case", "crash_geometry", "lemma", "monitor", "impossibility", "lift", "axis"}
    failing = {e["name"] for e in entries if not e["passed"]}
    assert failing == {"symmetric-0", "symmetric-1", "symmetric-2"}
    table = format_table(entries)
    assert table.splitlines()[0].split() == ["kind", "check", "result"]
