"""Lamination invariance, critical branches, pullbacks, and gap structure."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lamina.circle import Angle, Chord, Polygon
from lamina.errors import PreconditionError
from lamina.lamination import (
    FullCriticalCollection,
    Lamination,
    branch_inverse,
    check_sibling_invariance,
    chord_hausdorff,
    disjoint_sibling_collections,
    endpoint_star,
    equiv_classes,
    gap_degree,
    gaps,
    is_proper,
    isolated_leaf_diagnostic,
    pullback_generate,
    sibling_candidates,
    validate,
)


def _a(p: int, q: int = 1) -> Angle:
    return Angle(Fraction(p, q))


def _ch(p1, q1, p2, q2) -> Chord:
    return Chord(_a(p1, q1), _a(p2, q2))


BASILICA = Lamination(2, [_ch(1, 3, 2, 3)])
CHAIN = Lamination(2, [_ch(1, 3, 2, 3), _ch(1, 6, 5, 6)])
DIAMETER_FCC = FullCriticalCollection(2, [_ch(1, 4, 3, 4)])


# --- Lamination container --------------------------------------------------


def test_lamination_basics():
    lam = CHAIN
    assert lam.degree == 2
    assert len(lam) == 2
    assert _ch(1, 3, 2, 3) in lam
    assert _ch(1, 5, 2, 5) not in lam
    assert lam.sorted_leaves() == (_ch(1, 6, 5, 6), _ch(1, 3, 2, 3))
    assert lam.endpoints() == (_a(1, 6), _a(1, 3), _a(2, 3), _a(5, 6))
    assert repr(BASILICA) == "Lamination(degree=2, 1 leaves)"
    assert repr(Lamination(2, [_ch(1, 3, 2, 3)], depth_truncation=1)) == (
        "Lamination(degree=2, 1 leaves, depth_truncation=1)"
    )


def test_lamination_rejects_degenerate_leaf():
    with pytest.raises(PreconditionError, match="degenerate chord 1/3 1/3 cannot be a leaf"):
        Lamination(2, [Chord(_a(1, 3), _a(1, 3))])


def test_lamination_rejects_negative_truncation():
    with pytest.raises(PreconditionError, match="depth_truncation must be >= 0"):
        Lamination(2, [], depth_truncation=-1)


def test_frontier_without_truncation_is_empty():
    assert Lamination(2, [_ch(1, 3, 2, 3), _ch(1, 6, 5, 6)]).frontier_leaves() == frozenset()


def test_frontier_of_truncated_set_is_the_unmapped_layer():
    tr = Lamination(2, [_ch(1, 3, 2, 3), _ch(1, 6, 5, 6)], depth_truncation=1)
    assert tr.frontier_leaves() == frozenset({_ch(1, 6, 5, 6)})


def test_lamination_equality_ignores_discard_log():
    assert Lamination(2, [_ch(1, 3, 2, 3)]) == Lamination(2, [_ch(1, 3, 2, 3)])
    assert Lamination(2, [_ch(1, 3, 2, 3)]) != Lamination(3, [_ch(1, 3, 2, 3)])
    assert Lamination(2, [_ch(1, 3, 2, 3)]) != Lamination(2, [_ch(1, 3, 2, 3)], depth_truncation=2)


# --- critical collections --------------------------------------------------


def test_fcc_counts_chords():
    with pytest.raises(PreconditionError, match="needs 1 distinct chords, got 2"):
        FullCriticalCollection(2, [_ch(1, 4, 3, 4), _ch(0, 1, 1, 2)])
    with pytest.raises(PreconditionError, match="needs 2 distinct chords, got 1"):
        FullCriticalCollection(3, [_ch(0, 1, 1, 3)])


def test_fcc_rejects_non_critical():
    with pytest.raises(PreconditionError, match="chord 1/3 2/3 is not critical for degree 2"):
        FullCriticalCollection(2, [_ch(1, 3, 2, 3)])


def test_fcc_rejects_crossing_and_loops():
    with pytest.raises(PreconditionError, match="critical chords 0/1 1/3 and 1/6 1/2 cross"):
        FullCriticalCollection(3, [_ch(0, 1, 1, 3), _ch(1, 6, 1, 2)])
    with pytest.raises(PreconditionError, match="form a loop"):
        FullCriticalCollection(4, [_ch(0, 1, 1, 4), _ch(1, 4, 1, 2), _ch(0, 1, 1, 2)])


def test_branch_conventions_are_half_open():
    assert DIAMETER_FCC.branch_bases() == (
        ((_a(3, 4), _a(1, 4)),),
        ((_a(1, 4), _a(3, 4)),),
    )
    assert DIAMETER_FCC.branch_of(_a(1, 4)) == 1
    assert DIAMETER_FCC.branch_of(_a(1, 2)) == 1
    assert DIAMETER_FCC.branch_of(_a(3, 4)) == 0
    assert DIAMETER_FCC.branch_of(_a(0)) == 0


def test_branch_inverse_hits_every_branch_once():
    assert branch_inverse(DIAMETER_FCC, _a(1, 3)) == [(0, _a(1, 6)), (1, _a(2, 3))]
    fcc3 = FullCriticalCollection(3, [_ch(0, 1, 1, 3), _ch(1, 2, 5, 6)])
    pre = branch_inverse(fcc3, _a(1, 4))
    assert [b for b, _ in pre] == [0, 1, 2]
    assert sorted(x for _, x in pre) == [_a(1, 12), _a(5, 12), _a(3, 4)]


# --- validate --------------------------------------------------------------


def test_validate_accepts_forward_closed_sets():
    rep = validate(CHAIN)
    assert rep.ok
    assert bool(rep)
    assert rep.first_crossing is None
    assert rep.closure_failures == ()


def test_validate_reports_first_crossing():
    rep = validate(Lamination(2, [_ch(1, 7, 3, 7), _ch(2, 7, 6, 7)]))
    assert not rep.ok
    assert rep.first_crossing == (_ch(1, 7, 3, 7), _ch(2, 7, 6, 7))


def test_validate_reports_closure_failures():
    rep = validate(Lamination(2, [_ch(1, 5, 2, 5)]))
    assert not rep.ok
    assert rep.closure_failures == (_ch(1, 5, 2, 5),)


def test_validate_waives_truncation_frontier():
    leaf = _ch(1, 24, 23, 24)
    # without truncation the missing image is a closure failure ...
    assert validate(Lamination(2, [leaf])).closure_failures == (leaf,)
    # ... but a frontier leaf of a truncated set is exempt
    tr = Lamination(2, [leaf], depth_truncation=0, depths={leaf: 0})
    assert validate(tr).ok


# --- sibling machinery -----------------------------------------------------


def test_sibling_candidates_of_the_fixed_leaf():
    cands = sibling_candidates(2, _ch(1, 3, 2, 3))
    assert [str(c) for c in cands] == ["1/6 1/3", "1/6 5/6", "1/3 2/3", "2/3 5/6"]


def test_sibling_candidates_errors():
    with pytest.raises(PreconditionError, match="non-degenerate"):
        sibling_candidates(2, Chord(_a(1, 3), _a(1, 3)))
    with pytest.raises(PreconditionError, match="critical leaf has degenerate image"):
        sibling_candidates(2, _ch(1, 4, 3, 4))


@given(st.fractions(min_value=0, max_value=1, max_denominator=60),
       st.fractions(min_value=0, max_value=1, max_denominator=60),
       st.integers(min_value=2, max_value=4))
def test_sibling_candidates_number_d_squared(x, y, d):
    c = Chord(Angle(x), Angle(y))
    if c.is_degenerate() or Chord(c.a.times(d), c.b.times(d)).is_degenerate():
        return
    cands = sibling_candidates(d, c)
    assert len(cands) == d * d
    assert list(cands) == sorted(cands)
    img = frozenset({c.a.times(d), c.b.times(d)})
    for m in cands:
        assert frozenset({m.a.times(d), m.b.times(d)}) == img


def test_disjoint_sibling_collections():
    colls = disjoint_sibling_collections(2, _ch(1, 3, 2, 3))
    assert colls == [(_ch(1, 6, 5, 6), _ch(1, 3, 2, 3))]


def test_sibling_invariance_missing_mate():
    rep = check_sibling_invariance(BASILICA)
    assert not rep.passed
    assert rep.sibling_failures == (_ch(1, 3, 2, 3),)
    assert rep.pullback_failures == ()


def test_sibling_invariance_missing_preimage():
    rep = check_sibling_invariance(CHAIN)
    assert not rep.passed
    # nothing in the set maps onto the shorter leaf
    assert rep.pullback_failures == (_ch(1, 6, 5, 6),)
    assert rep.sibling_failures == ()
    assert rep.closure_failures == ()


def test_sibling_invariance_truncation_waives_frontier():
    tr = Lamination(2, [_ch(1, 3, 2, 3), _ch(1, 6, 5, 6)], depth_truncation=1)
    rep = check_sibling_invariance(tr)
    assert rep.passed
    assert rep.waived == (_ch(1, 6, 5, 6),)
    assert rep.collections == ((_ch(1, 3, 2, 3), (_ch(1, 6, 5, 6), _ch(1, 3, 2, 3))),)


# --- pullback generation ---------------------------------------------------


def test_pullback_depth_one_of_the_quadratic_fixed_leaf():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=1)
    assert [str(c) for c in out.sorted_leaves()] == [
        "1/8 7/8", "1/6 5/6", "1/4 3/4", "1/3 2/3", "3/8 5/8",
    ]
    assert out.depth_truncation == 1
    assert out.discards == ()


def test_pullback_depth_two_leaves_and_depth_labels():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=2)
    expect = {
        "1/16 15/16": 2, "1/12 11/12": 2, "1/8 7/8": 1, "1/6 5/6": 1,
        "3/16 13/16": 2, "1/4 3/4": 0, "5/16 11/16": 2, "1/3 2/3": 0,
        "3/8 5/8": 1, "5/12 7/12": 2, "7/16 9/16": 2,
    }
    assert {str(c): out.generation_depth(c) for c in out.sorted_leaves()} == expect
    assert len(out.frontier_leaves()) == 6
    sib = check_sibling_invariance(out)
    assert sib.passed
    assert validate(out).ok


def test_pullback_depth_three_sizes():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=3)
    assert len(out) == 23
    assert out.discards == ()
    assert check_sibling_invariance(out).passed


def test_pullback_rabbit_seed():
    rabbit = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
    fcc = FullCriticalCollection(2, [_ch(5, 56, 33, 56)])
    d1 = pullback_generate(fcc, rabbit, depth=1)
    assert len(d1) == 9
    d3 = pullback_generate(fcc, rabbit, depth=3)
    assert len(d3) == 39
    assert d3.discards == ()
    assert check_sibling_invariance(d3).passed


def test_pullback_discard_log_is_deterministic():
    """A critical chord through the web forces candidate discards."""
    rabbit = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
    fcc = FullCriticalCollection(2, [_ch(1, 14, 4, 7)])
    out = pullback_generate(fcc, rabbit, depth=2)
    log = [(disc.depth, str(disc.candidate), str(disc.blocker)) for disc in out.discards]
    assert log == [
        (1, "1/14 2/7", "1/7 4/7"),
        (2, "1/14 15/28", "1/7 4/7"),
    ]


def test_pullback_preconditions():
    with pytest.raises(PreconditionError, match="depth"):
        pullback_generate(DIAMETER_FCC, BASILICA, depth=-1)
    with pytest.raises(PreconditionError, match="seed degree 3 != critical collection degree 2"):
        pullback_generate(DIAMETER_FCC, Lamination(3, [_ch(1, 3, 2, 3)]), depth=1)
    with pytest.raises(PreconditionError, match="seed lamination is invalid"):
        pullback_generate(DIAMETER_FCC, Lamination(2, [_ch(1, 5, 2, 5)]), depth=1)
    with pytest.raises(
        PreconditionError,
        match="seed leaf 1/7 2/7 crosses critical chord 1/4 3/4",
    ):
        seed = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
        pullback_generate(DIAMETER_FCC, seed, depth=1)


def test_pullback_empty_seed_cubic():
    fcc = FullCriticalCollection(3, [_ch(0, 1, 1, 3), _ch(1, 2, 5, 6)])
    out = pullback_generate(fcc, Lamination(3), depth=2)
    assert len(out) == 26
    assert out.discards == ()
    assert check_sibling_invariance(out).passed


# --- gaps ------------------------------------------------------------------


def test_gaps_of_the_two_leaf_chain():
    gs = gaps(CHAIN)
    got = [([str(v) for v in g.vertices], gap_degree(2, g)) for g in gs]
    assert got == [
        (["1/6", "1/3", "2/3", "5/6"], 2),
        (["1/6", "5/6"], 1),
        (["1/3", "2/3"], 1),
    ]
    quad = gs[0]
    assert quad.boundary == Polygon([_a(1, 6), _a(1, 3), _a(2, 3), _a(5, 6)])
    assert set(quad.incident_leaves) == {_ch(1, 6, 5, 6), _ch(1, 3, 2, 3)}
    assert not quad.is_full_disk
    assert not quad.is_outer_truncation_artifact


def test_gaps_of_the_empty_lamination():
    gs = gaps(Lamination(2))
    assert len(gs) == 1
    assert gs[0].is_full_disk
    assert gs[0].vertices == ()
    assert gs[0].boundary is None


def test_gaps_single_leaf_both_sides_full_degree():
    gs = gaps(Lamination(2, [_ch(1, 4, 3, 4)]))
    assert [( [str(v) for v in g.vertices], gap_degree(2, g)) for g in gs] == [
        (["1/4", "3/4"], 2),
        (["1/4", "3/4"], 2),
    ]


def test_gaps_of_the_depth_two_pullback():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=2)
    gs = gaps(out)
    assert len(gs) == 12
    finite = [g for g in gs if not g.is_outer_truncation_artifact]
    # only the two quads built entirely from settled leaves survive the
    # artifact filter at this depth
    assert [[str(v) for v in g.vertices] for g in finite] == [
        ["1/8", "1/6", "5/6", "7/8"],
        ["1/3", "3/8", "5/8", "2/3"],
    ]
    assert all(gap_degree(2, g) == 1 for g in gs)


def test_gaps_of_the_depth_three_pullback():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=3)
    gs = gaps(out)
    assert len(gs) == 24
    finite = [g for g in gs if not g.is_outer_truncation_artifact]
    assert [[str(v) for v in g.vertices] for g in finite] == [
        ["1/16", "1/12", "11/12", "15/16"],
        ["1/6", "3/16", "13/16", "5/6"],
        ["5/16", "1/3", "2/3", "11/16"],
        ["5/12", "7/16", "9/16", "7/12"],
    ]
    assert all(gap_degree(2, g) == 1 for g in finite)


def test_gaps_dumbbell_central_quad_has_degree_two():
    lam = Lamination(2, [_ch(1, 5, 4, 5), _ch(2, 5, 3, 5)])
    gs = gaps(lam)
    degs = {tuple(str(v) for v in g.vertices): gap_degree(2, g) for g in gs}
    assert degs[("1/5", "2/5", "3/5", "4/5")] == 2
    assert degs[("1/5", "4/5")] == 1
    assert degs[("2/5", "3/5")] == 1


def test_gap_degree_needs_vertices():
    full = gaps(Lamination(2))[0]
    with pytest.raises(PreconditionError, match="needs a gap with vertices"):
        gap_degree(2, full)


def test_rabbit_pullback_keeps_triangle_gaps():
    rabbit = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
    fcc = FullCriticalCollection(2, [_ch(5, 56, 33, 56)])
    out = pullback_generate(fcc, rabbit, depth=3)
    finite = [g for g in gaps(out) if not g.is_outer_truncation_artifact]
    assert len(finite) == 12
    tris = {tuple(str(v) for v in g.vertices) for g in finite if len(g.vertices) == 3}
    assert ("1/7", "2/7", "4/7") in tris
    assert ("1/14", "9/14", "11/14") in tris
    assert all(gap_degree(2, g) == 1 for g in finite)


# --- equivalence, stars, properness ----------------------------------------


def test_equiv_classes_join_through_shared_endpoints():
    eq = equiv_classes(CHAIN)
    assert eq.classes == ((_a(1, 6), _a(5, 6)), (_a(1, 3), _a(2, 3)))
    assert eq.class_of(_a(1, 3)) == (_a(1, 3), _a(2, 3))
    assert eq.class_of(_a(1, 7)) is None
    rabbit = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
    assert equiv_classes(rabbit).classes == ((_a(1, 7), _a(2, 7), _a(4, 7)),)


def test_endpoint_star():
    rabbit = Lamination(2, [_ch(1, 7, 2, 7), _ch(2, 7, 4, 7), _ch(1, 7, 4, 7)])
    assert endpoint_star(rabbit, _a(1, 7)) == frozenset({_a(2, 7), _a(4, 7)})
    assert endpoint_star(rabbit, _a(1, 3)) == frozenset()


def test_is_proper_flags_periodic_critical_leaf():
    rep = is_proper(Lamination(2, [_ch(1, 3, 5, 6)]))
    assert not rep.proper
    assert rep.kind == "critical-leaf-periodic-endpoint"
    assert rep.witness_leaf == _ch(1, 3, 5, 6)


def test_is_proper_flags_critical_wedge():
    lam = Lamination(2, [_ch(1, 7, 9, 28), _ch(1, 7, 23, 28)])
    rep = is_proper(lam)
    assert not rep.proper
    assert rep.kind == "critical-wedge-periodic-vertex"
    assert rep.witness_wedge == (_a(1, 7), _ch(1, 7, 9, 28), _ch(1, 7, 23, 28))


def test_is_proper_accepts_the_depth_two_pullback():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=2)
    rep = is_proper(out)
    assert rep.proper
    assert bool(rep)


# --- metric helpers --------------------------------------------------------


def test_chord_hausdorff_values():
    assert chord_hausdorff(_ch(1, 3, 2, 3), _ch(1, 3, 2, 3)) == 0
    assert chord_hausdorff(_ch(0, 1, 1, 2), _ch(1, 4, 3, 4)) == Fraction(1, 4)
    assert chord_hausdorff(_ch(1, 3, 2, 3), Chord(_a(1, 3), _a(1, 3))) == Fraction(1, 3)
    assert chord_hausdorff(_ch(1, 3, 2, 3), _ch(1, 6, 5, 6)) == Fraction(1, 6)


@given(st.fractions(min_value=0, max_value=1, max_denominator=40),
       st.fractions(min_value=0, max_value=1, max_denominator=40),
       st.fractions(min_value=0, max_value=1, max_denominator=40),
       st.fractions(min_value=0, max_value=1, max_denominator=40))
def test_chord_hausdorff_is_symmetric(a, b, c, d):
    c1 = Chord(Angle(a), Angle(b))
    c2 = Chord(Angle(c), Angle(d))
    assert chord_hausdorff(c1, c2) == chord_hausdorff(c2, c1)
    assert chord_hausdorff(c1, c1) == 0


def test_isolated_leaf_diagnostic():
    out = pullback_generate(DIAMETER_FCC, BASILICA, depth=2)
    assert isolated_leaf_diagnostic(out, _ch(1, 3, 2, 3), Fraction(1, 8)) == (
        "two-sided-approximated"
    )
    assert isolated_leaf_diagnostic(out, _ch(1, 16, 15, 16), Fraction(1, 16)) == "one-sided"
    assert isolated_leaf_diagnostic(out, _ch(1, 16, 15, 16), Fraction(1, 100)) == (
        "isolated-at-this-depth"
    )
    with pytest.raises(PreconditionError, match="leaf is not in the lamination"):
        isolated_leaf_diagnostic(out, _ch(1, 9, 2, 9), Fraction(1, 8))
