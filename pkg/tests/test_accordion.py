"""Accordions of linked chords and the four-way orbit classification."""
from __future__ import annotations

from fractions import Fraction

import pytest

from lamina.circle import Angle, Chord
from lamina.errors import PreconditionError
from lamina.accordion import (
    accordion_vs_lamination,
    classify_accordion,
    joint_orbit_structure,
    mutually_order_preserving,
    order_preserving_on,
    orbit_accordion,
)
from lamina.lamination import Lamination


def _a(p: int, q: int = 1) -> Angle:
    return Angle(Fraction(p, q))


def _ch(p1, q1, p2, q2) -> Chord:
    return Chord(_a(p1, q1), _a(p2, q2))


# --- accordion construction ------------------------------------------------


def test_accordion_vs_lamination_collects_crossing_leaves():
    lam = Lamination(2, [_ch(1, 3, 2, 3)])
    acc = accordion_vs_lamination(lam, _ch(1, 4, 5, 12))
    assert acc.axis == _ch(1, 4, 5, 12)
    # the axis itself is always a member
    assert acc.members == frozenset({_ch(1, 4, 5, 12), _ch(1, 3, 2, 3)})
    assert not acc.is_trivial()
    assert acc.vertex_set() == (_a(1, 4), _a(1, 3), _a(5, 12), _a(2, 3))


def test_accordion_vs_lamination_rejects_degenerate_axis():
    with pytest.raises(PreconditionError, match="axis must be non-degenerate"):
        accordion_vs_lamination(Lamination(2), Chord(_a(1, 3), _a(1, 3)))


def test_orbit_accordion_members_and_triviality():
    acc = orbit_accordion(2, _ch(2, 15, 8, 15), _ch(1, 15, 4, 15))
    assert acc.members == frozenset({_ch(2, 15, 8, 15), _ch(1, 15, 4, 15)})
    assert len(acc) == 2
    # an orbit placed entirely outside the axis produces only the axis
    far = orbit_accordion(2, _ch(11, 15, 14, 15), _ch(1, 15, 4, 15))
    assert far.members == frozenset({_ch(1, 15, 4, 15)})
    assert far.is_trivial()


def test_orbit_accordion_rejects_degenerate():
    with pytest.raises(PreconditionError, match="must be non-degenerate"):
        orbit_accordion(2, Chord(_a(1, 3), _a(1, 3)), _ch(1, 15, 4, 15))


# --- order preservation ----------------------------------------------------


def test_order_preserving_on_clean_orbit():
    assert order_preserving_on(2, (_a(1, 7), _a(2, 7), _a(4, 7))) is None


def test_order_preserving_on_orientation_violation():
    bad = order_preserving_on(2, (_a(1, 15), _a(8, 15), _a(12, 15)))
    assert bad is not None
    assert bad.kind == "orientation"
    assert bad.vertices == (_a(1, 15), _a(8, 15), _a(4, 5))


def test_order_preserving_on_non_injective():
    bad = order_preserving_on(2, (_a(1, 6), _a(2, 3)))
    assert bad.kind == "non-injective"
    assert bad.vertices == (_a(1, 6), _a(2, 3))


def test_mutually_order_preserving_accepts_the_flip_pair():
    rep = mutually_order_preserving(2, _ch(1, 15, 4, 15), _ch(2, 15, 8, 15))
    assert rep.ok
    assert rep.reason is None


def test_mutually_order_preserving_finds_the_reverse_violation():
    # direction 1 is fine; the orbit of {3/15, 8/15} against the other
    # chord reverses a triple
    rep = mutually_order_preserving(2, _ch(3, 15, 8, 15), _ch(1, 15, 4, 15))
    assert not rep.ok
    assert rep.reason == "order violation"
    assert rep.direction == 2
    assert rep.step == 0
    assert rep.axis_chord == _ch(1, 15, 4, 15)
    assert rep.violation.kind == "orientation"
    assert rep.violation.vertices == (_a(1, 15), _a(8, 15), _a(4, 5))


def test_mutually_order_preserving_precritical_axis():
    rep = mutually_order_preserving(2, _ch(1, 8, 3, 8), _ch(1, 4, 3, 4))
    assert not rep.ok
    assert rep.reason == "precritical axis"


def test_mutually_order_preserving_rejects_degenerate():
    with pytest.raises(PreconditionError, match="needs non-degenerate chords"):
        mutually_order_preserving(2, Chord(_a(1, 3), _a(1, 3)), _ch(1, 4, 3, 4))


# --- the four-case classification ------------------------------------------


def test_classify_requires_linkage():
    with pytest.raises(PreconditionError, match="not linked"):
        classify_accordion(2, _ch(1, 7, 2, 7), _ch(4, 7, 5, 7))


def test_classify_requires_mutual_order_preservation():
    with pytest.raises(PreconditionError, match="mutually order preserving accordions required"):
        classify_accordion(2, _ch(1, 15, 4, 15), _ch(3, 15, 8, 15))


def test_case_one_preperiodic_movers():
    fixtures = [
        (3, _ch(1, 24, 5, 24), _ch(0, 1, 1, 12)),
        (3, _ch(19, 24, 23, 24), _ch(0, 1, 11, 12)),
        (3, _ch(1, 40, 107, 120), _ch(1, 120, 89, 120)),
    ]
    for d, axis, moving in fixtures:
        case = classify_accordion(d, axis, moving)
        assert case.case_id == 1, (axis, moving)
        assert case.flip_power is None
        assert case.crossing_power is None


def test_case_two_endpoint_flip():
    fixtures = [
        (2, _ch(1, 15, 4, 15), _ch(2, 15, 8, 15), 2),
        (3, _ch(1, 8, 3, 8), _ch(1, 4, 3, 4), 1),
        (3, _ch(1, 16, 9, 16), _ch(3, 16, 11, 16), 2),
    ]
    for d, axis, moving, power in fixtures:
        case = classify_accordion(d, axis, moving)
        assert case.case_id == 2, (axis, moving)
        assert case.flip_subcase == "endpoint-flip"
        assert case.flip_power == power


def test_case_two_separation():
    fixtures = [
        (2, _ch(2, 63, 32, 63), _ch(1, 63, 8, 63)),
        (2, _ch(4, 63, 16, 63), _ch(1, 63, 8, 63)),
        (2, _ch(1, 63, 4, 63), _ch(2, 63, 16, 63)),
    ]
    for d, axis, moving in fixtures:
        case = classify_accordion(d, axis, moving)
        assert case.case_id == 2, (axis, moving)
        assert case.flip_subcase == "separation"
        assert case.flip_power == 3


def test_case_three_disjoint_periodic_orbits():
    fixtures = [
        (3, _ch(1, 26, 7, 26), _ch(2, 13, 4, 13)),
        (3, _ch(1, 26, 7, 26), _ch(2, 13, 8, 13)),
        (3, _ch(1, 26, 11, 26), _ch(5, 13, 10, 13)),
        (3, _ch(1, 26, 15, 26), _ch(2, 13, 9, 13)),
    ]
    for d, axis, moving in fixtures:
        case = classify_accordion(d, axis, moving)
        assert case.case_id == 3, (axis, moving)
        assert case.common_period == 3
        assert case.flip_power is None


def test_case_four_twice_crossing_orbits():
    fixtures = [
        (2, _ch(1, 31, 4, 31), _ch(2, 31, 8, 31), 3, "2/31 16/31", 1),
        (2, _ch(1, 31, 4, 31), _ch(2, 31, 16, 31), 2, "2/31 8/31", 2),
        (2, _ch(1, 31, 8, 31), _ch(2, 31, 16, 31), 3, "4/31 16/31", 2),
        (2, _ch(1, 31, 8, 31), _ch(4, 31, 16, 31), 2, "2/31 16/31", 1),
    ]
    for d, axis, moving, power, image, pattern in fixtures:
        case = classify_accordion(d, axis, moving)
        assert case.case_id == 4, (axis, moving)
        assert case.crossing_power == power
        assert str(case.crossing_image) == image
        assert case.interleave_pattern == pattern


def test_classification_impossible_mixed_periods():
    # linked, mutually order preserving, but the endpoint periods split
    with pytest.raises(PreconditionError, match="endpoint periods differ in case 3"):
        classify_accordion(3, _ch(0, 1, 1, 4), _ch(1, 8, 5, 8))


# --- joint orbit structure of the hull -------------------------------------


def test_joint_orbit_all_disjoint():
    # preimage quadrilateral of a period-four rotational quad, placed in
    # the far branch: its hull and the cycle hull never meet
    js = joint_orbit_structure(3, _ch(161, 240, 169, 240), _ch(163, 240, 187, 240))
    assert js.verdict == "all-disjoint"
    assert len(js.images) == 2
    assert js.r is None
    assert js.components == ()


def test_joint_orbit_periodic_structure():
    js = joint_orbit_structure(3, _ch(1, 8, 3, 8), _ch(1, 4, 3, 4))
    assert js.verdict == "periodic-structure"
    assert js.r == 0
    assert len(js.components) == 1
    assert js.component_periods == (1,)
    assert js.vertex_orbit_count == 2
    assert js.eventual_period == 2


def test_joint_orbit_identity_return_on_lone_quadrilateral():
    js = joint_orbit_structure(5, _ch(0, 1, 1, 2), _ch(1, 4, 3, 4))
    assert js.verdict == "periodic-structure"
    assert js.component_periods == (1,)
    assert js.vertex_orbit_count == 4
    assert js.eventual_period == 1
    assert [str(v) for v in js.components[0].vertices] == ["0/1", "1/4", "1/2", "3/4"]


def test_joint_orbit_rejects_single_vertex_orbit():
    with pytest.raises(PreconditionError, match="vertex orbits number 1, expected 2, 3 or 4"):
        joint_orbit_structure(2, _ch(1, 15, 4, 15), _ch(2, 15, 8, 15))


def test_joint_orbit_rejects_disordered_components():
    with pytest.raises(PreconditionError, match="violates order preservation"):
        joint_orbit_structure(3, _ch(1, 26, 7, 26), _ch(2, 13, 4, 13))
