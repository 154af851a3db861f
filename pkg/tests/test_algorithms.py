import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings, strategies as st

from conftest import frames, rational_points, rationals
from gathersim.algorithms import (
    EXTREMITY_RATIOS,
    STAY,
    Phase,
    axis_rdv_decide,
    band_start,
    classify_view,
    lift_line_algorithm,
    lifted_suir,
    phase_of_level,
    stay_line,
    suig_decide,
    suir_decide,
    suir_line,
)
from gathersim.field import ORIGIN, SQRT3, Point2, convex_hull, in_hull, level_of_sq, scalar
from gathersim.model import Frame, LocalView, Side, local_level, side_of


def P(x, y):
    return Point2.of(x, y)


def view(*pts):
    return LocalView((ORIGIN, *pts))


# --- level bands ------------------------------------------------------------


def _bands(limit):
    """Band table built by walking the groups one level at a time."""
    table = {}
    level = 1
    table.update({1: ("C2", 0), 2: ("C3", 0)})
    level = 3
    k = 1
    while level <= limit:
        for tag, width in (("A", k), ("B", k), ("C1", 1), ("C2", 1), ("C3", 1)):
            for _ in range(width):
                table[level] = (tag, k)
                level += 1
        k += 1
    return table


@pytest.mark.parametrize(
    "level,want",
    [(-4, "A(0)"), (0, "A(0)"), (1, "C2(0)"), (2, "C3(0)"), (3, "A(1)"), (4, "B(1)"),
     (5, "C1(1)"), (8, "A(2)"), (9, "A(2)"), (10, "B(2)"), (12, "C1(2)"), (15, "A(3)")],
)
def test_phase_examples(level, want):
    assert str(phase_of_level(level)) == want


def test_partition_is_total_on_range():
    table = _bands(210)
    for level in range(-64, 201):
        got = phase_of_level(level)
        want = ("A", 0) if level < 1 else table[level]
        assert (got.tag, got.k) == want


def test_band_edges_follow_closed_form():
    for k in range(1, 13):
        s = band_start(k)
        assert s == k * (k + 2)
        assert band_start(k + 1) == s + 2 * k + 3
        assert phase_of_level(s).tag == "A" and phase_of_level(s - 1).tag == "C3"
        assert phase_of_level(s + k).tag == "B"
        assert [phase_of_level(s + 2 * k + j).tag for j in range(3)] == ["C1", "C2", "C3"]


# --- classification -----------------------------------------------------------


def test_classify_examples():
    text = classify_view(view(P(8, 0), P(9, 0)))
    assert text.tag == "Text" and text.anchor == P(9, 0)
    half = classify_view(LocalView((ORIGIN, Point2(scalar(mpq(1, 2)), scalar(0)), P(1, 0))))
    assert half.tag == "Tsec"
    assert classify_view(view(P(1, 0), P(0, 1))).tag == "Tsec"
    assert classify_view(view()).tag == "Tsec"


def test_two_qualifying_extremities_is_not_text():
    # gaps 1 and 1 over a span of 9 on both ends
    assert classify_view(view(P(1, 0), P(8, 0), P(9, 0))).tag == "Tsec"


_LINE_PARAMS = [
    (0, 1, 9), (0, 8, 9), (0, 9, 80), (0, 10, 81), (0, 1, 8), (0, 10, 18), (0, 9, 16),
    (0, 80, 81), (0, 1, 2), (0, 1, 81, 90), (0, 3, 5, 7), (0, 1, 80, 81),
]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(_LINE_PARAMS), rational_points(), rational_points(), st.integers(0, 3), frames())
def test_text_and_sec_tags_are_frame_invariant(params, base, direction, who, f):
    assume(not direction.is_origin())
    pts = [base + direction.scale(t) for t in params]
    me = pts[who % len(pts)]
    v = LocalView(tuple(p - me for p in pts))
    before = classify_view(v)
    after = classify_view(v.transformed(f))
    assert before.tag == after.tag
    if before.tag == "Text":
        assert after.anchor == f.apply(before.anchor)


@given(st.lists(rational_points(), min_size=2, max_size=5))
def test_scattered_views_are_sec(points):
    v = LocalView(tuple({ORIGIN, *points}))
    assume(len(v) >= 3)
    tag = classify_view(v).tag
    assert tag in ("Text", "Tsec")


# --- decisions ------------------------------------------------------------------


def test_suig_examples():
    cmd = suig_decide(view(Point2(scalar(mpq(1, 32)), scalar(0))))
    assert str(cmd.phase) == "C1(1)" and cmd.side is Side.LEFT
    assert cmd.destination == Point2(scalar(mpq(1, 64)), scalar(0))
    cmd = suig_decide(view(Point2(scalar(mpq(-1, 10)), scalar(0))))
    assert str(cmd.phase) == "B(1)" and cmd.side is Side.RIGHT
    assert cmd.destination == Point2(scalar(mpq(-1, 100)), scalar(0))
    assert suig_decide(view(P(8, 0), P(9, 0))).destination == P(9, 0)
    assert suig_decide(view()).is_stay


def test_a_twentieth_is_level_five():
    # 1/20 lies in [1/32, 1/16), so a robot there is in C1(1) and moves half way
    cmd = suig_decide(view(Point2(scalar(mpq(-1, 20)), scalar(0))))
    assert cmd.level == 5 and str(cmd.phase) == "C1(1)"
    assert cmd.destination == Point2(scalar(mpq(-1, 40)), scalar(0))


@pytest.mark.parametrize(
    "tag,left,right",
    [(3, "1/2", "1/2"), (4, "1/9", "1/10"), (5, "1/2", "1/2"), (6, "1", "1/2"), (7, "1/2", "1")],
)
def test_suig_move_table(tag, left, right):
    d = mpq(3, 2 << tag)  # level == tag
    assert str(suig_decide(view(Point2(scalar(d), scalar(0)))).fraction) == left
    assert str(suig_decide(view(Point2(scalar(-d), scalar(0)))).fraction) == right


def test_suir_examples():
    assert suir_decide(view(P(1, 0))).destination == Point2(scalar(mpq(1, 2)), scalar(0))
    q = Point2(scalar(mpq(-1, 2)), scalar(0))
    assert suir_decide(view(q)).destination == q
    q = Point2(scalar(0), scalar(mpq(1, 8)))
    assert suir_decide(view(q)).destination == q
    assert suir_decide(view()).is_stay
    with pytest.raises(ValueError):
        suir_decide(view(P(1, 0), P(0, 1)))


def test_axis_examples():
    assert axis_rdv_decide(view(P(2, 0))).destination == Point2(scalar(1), SQRT3)
    assert axis_rdv_decide(view(P(-2, 0))).destination == Point2(scalar(-1), SQRT3)
    assert axis_rdv_decide(view(P(3, 5))).destination == P(3, 5)
    assert axis_rdv_decide(view(P(0, -1))).is_stay


def test_lift_examples():
    cmd = lifted_suir(view(P(3, 4)))
    assert cmd.level == -2
    assert cmd.destination == Point2(scalar(mpq(3, 2)), scalar(2))
    stay = lift_line_algorithm(stay_line)
    assert stay(view(P(3, 4))).is_stay and stay(view()).is_stay
    with pytest.raises(ValueError):
        lifted_suir(view(P(1, 0), P(0, 1)))


def _two_point_view(direction: Point2, level: int, side: Side) -> LocalView:
    q = direction
    shift = level_of_sq(q.norm_sq()) - level
    q = q.scale(mpq(2) ** shift)
    if (side is Side.LEFT) != q.lex_positive():
        q = -q
    return view(q)


@settings(max_examples=150, deadline=None)
@given(rational_points(), rational_points(), st.integers(-8, 40), st.sampled_from(list(Side)))
def test_decisions_depend_only_on_side_and_level(d1, d2, level, side):
    assume(not d1.is_origin() and not d2.is_origin())
    v1 = _two_point_view(d1, level, side)
    v2 = _two_point_view(d2, level, side)
    assert local_level(v1) == local_level(v2) == level
    assert side_of(v1) is side_of(v2) is side
    for decide in (suig_decide, suir_decide, lifted_suir):
        assert decide(v1).fraction == decide(v2).fraction


@settings(max_examples=150, deadline=None)
@given(st.lists(rational_points(), min_size=1, max_size=6))
def test_destinations_stay_in_hull(points):
    v = LocalView(tuple({ORIGIN, *points}))
    hull = convex_hull(v.points)
    assert in_hull(suig_decide(v).destination, hull)
    if len(v) <= 2:
        assert in_hull(suir_decide(v).destination, hull)
        assert in_hull(lifted_suir(v).destination, hull)


@given(rational_points())
def test_lift_output_is_on_the_segment(q):
    assume(not q.is_origin())
    cmd = lifted_suir(view(q))
    assert cmd.destination == q.scale(cmd.fraction)
    assert cmd.fraction == suir_line(side_of(view(q)), q.norm_sq())


def test_extremity_ratio_set():
    assert EXTREMITY_RATIOS == {mpq(1, 9), mpq(1, 8), mpq(9, 80), mpq(10, 81), mpq(5, 9), mpq(9, 16), mpq(80, 81)}
    assert Phase("Text").two_point is False and STAY.is_stay
