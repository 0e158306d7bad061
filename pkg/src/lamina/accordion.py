"""Accordions: a chord together with the leaves that cross it.

The accordion of an axis chord with respect to a lamination (or to the
forward orbit of another chord) collects the leaves linked with the
axis, plus the axis itself.  When the two chords have *mutually order
preserving accordions* — sigma_d acts injectively and preserves circular
order on every accordion vertex set along both orbits — the joint
structure is extremely rigid: a four-case classification governs which
orbit images of one chord can cross the other, and the orbit of the
joint convex hull is either visiting pairwise disjoint sets or falls
into a finite periodic pattern of rotating polygons.

Both facts are implemented here as checked computations: the classifier
proves its answer by verifying the case's defining data, and the joint
orbit analysis re-verifies every structural claim it reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .circle import (
    Angle,
    Chord,
    ConvexSet,
    PairClass,
    classify_pair,
    convex_hull,
    sigma,
    vertices_of,
)
from .errors import PreconditionError
from .lamination import Lamination
from .orbits import (
    angle_orbit,
    hulls_interiors_intersect,
    hulls_touch_or_intersect,
    leaf_orbit,
)

__all__ = [
    "Accordion",
    "AccordionCase",
    "OrderViolation",
    "MutualOrderReport",
    "JointOrbitStructure",
    "accordion_vs_lamination",
    "orbit_accordion",
    "order_preserving_on",
    "mutually_order_preserving",
    "classify_accordion",
    "joint_orbit_structure",
]


@dataclass(frozen=True)
class Accordion:
    """An axis chord plus the leaves crossing it (axis included)."""

    axis: Chord
    members: FrozenSet[Chord]

    def __len__(self) -> int:
        return len(self.members)

    def is_trivial(self) -> bool:
        return self.members == frozenset((self.axis,))

    def vertex_set(self) -> Tuple[Angle, ...]:
        return tuple(sorted({v for c in self.members for v in c.endpoints}))


def accordion_vs_lamination(lam2: Lamination, axis: Chord) -> Accordion:
    """Accordion of ``axis`` with respect to a lamination's leaves."""
    if axis.is_degenerate():
        raise PreconditionError("accordion axis must be non-degenerate")
    members = {axis}
    for leaf in lam2.leaves:
        if classify_pair(leaf, axis) == PairClass.LINKED:
            members.add(leaf)
    return Accordion(axis=axis, members=frozenset(members))


def orbit_accordion(d: int, orbit_leaf: Chord, axis: Chord) -> Accordion:
    """Accordion of ``axis`` with respect to the forward orbit of a chord."""
    if axis.is_degenerate() or orbit_leaf.is_degenerate():
        raise PreconditionError("accordion chords must be non-degenerate")
    members = {axis}
    for c in _distinct_orbit_chords(d, orbit_leaf):
        if not c.is_degenerate() and classify_pair(c, axis) == PairClass.LINKED:
            members.add(c)
    return Accordion(axis=axis, members=frozenset(members))


def _distinct_orbit_chords(d: int, c: Chord) -> Tuple[Chord, ...]:
    info = leaf_orbit(d, c)
    return tuple(dict.fromkeys(info.leaves))


@dataclass(frozen=True)
class OrderViolation:
    """Why sigma_d fails to preserve circular order on a vertex set."""

    kind: str  # 'non-injective' | 'orientation'
    vertices: Tuple[Angle, ...]


def order_preserving_on(d: int, vertices: Sequence[Angle]) -> Optional[OrderViolation]:
    """Check sigma_d on a finite circle set: injective, orientation kept.

    Order preservation is triple-based: the map must be one-to-one on
    the set and every ordered triple's circular orientation must be
    preserved.  Returns None when the check passes, otherwise the first
    violation (a collapsed pair, or a triple whose image is reversed).
    """
    vs = sorted(set(vertices))
    imgs = {v: sigma(d, v) for v in vs}
    if len(set(imgs.values())) != len(vs):
        for u, w in itertools.combinations(vs, 2):
            if imgs[u] == imgs[w]:
                return OrderViolation(kind="non-injective", vertices=(u, w))
    for p, q, r in itertools.combinations(vs, 3):
        # p < q < r as angles, so (p, q, r) is positively oriented; the
        # image triple must be too.
        if not _positively_oriented(imgs[p], imgs[q], imgs[r]):
            return OrderViolation(kind="orientation", vertices=(p, q, r))
    return None


def _positively_oriented(x: Angle, y: Angle, z: Angle) -> bool:
    """Distinct x, y, z appear in counterclockwise order."""
    return (y.value - x.value) % 1 < (z.value - x.value) % 1


@dataclass(frozen=True)
class MutualOrderReport:
    """Verdict of the mutual order-preservation scan for a chord pair.

    On failure, ``reason`` is ``precritical axis``, ``trivial
    accordion``, or ``order violation``; for the latter the offending
    axis image (``axis_chord`` at orbit step ``step``, with the axis
    being the first or second input per ``direction``) and the violation
    itself are attached.
    """

    ok: bool
    reason: Optional[str] = None
    direction: Optional[int] = None
    step: Optional[int] = None
    axis_chord: Optional[Chord] = None
    violation: Optional[OrderViolation] = None

    def __bool__(self) -> bool:
        return self.ok


def mutually_order_preserving(d: int, ell1: Chord, ell2: Chord) -> MutualOrderReport:
    """Do both chords have order preserving accordions w.r.t. each other?

    For each direction the axis runs over its entire (finite) forward
    orbit; at every step the accordion against the full orbit of the
    other chord must be non-trivial at step 0 and have sigma_d injective
    and order preserving on its vertex set.  A (pre)critical input fails
    immediately: some forward image collapses, so no power of sigma_d is
    one-to-one on the endpoints.
    """
    for which, c in ((1, ell1), (2, ell2)):
        if c.is_degenerate():
            raise PreconditionError("mutually_order_preserving needs non-degenerate chords")
        if leaf_orbit(d, c).collapses_at is not None:
            return MutualOrderReport(ok=False, reason="precritical axis",
                                     direction=which)
    for which, axis, other in ((1, ell1, ell2), (2, ell2, ell1)):
        if orbit_accordion(d, other, axis).is_trivial():
            return MutualOrderReport(ok=False, reason="trivial accordion",
                                     direction=which)
        for k, ax in enumerate(_distinct_orbit_chords(d, axis)):
            acc = orbit_accordion(d, other, ax)
            bad = order_preserving_on(d, acc.vertex_set())
            if bad is not None:
                return MutualOrderReport(
                    ok=False, reason="order violation", direction=which,
                    step=k, axis_chord=ax, violation=bad,
                )
    return MutualOrderReport(ok=True)


# ---------------------------------------------------------------------------
# The four-case classification


@dataclass(frozen=True)
class AccordionCase:
    """Outcome of the four-case analysis of one linked, mutually
    order-preserving pair (axis chord, orbit chord).

    * case 1: no forward image of the orbit chord crosses the axis.
    * case 2: some power j flips the orbit chord endpoint-wise; the
      sub-case records whether the same power also swaps the axis
      endpoints (``endpoint-flip``) or displaces them to opposite sides
      of the orbit chord (``separation``).
    * case 3: all four endpoints share one period, with the two chords'
      endpoint pairs lying in two orbits each.
    * case 4: exactly one other orbit image crosses the axis, at the
      minimal power i, with one of the two interleaving patterns.
    """

    case_id: int
    flip_power: Optional[int] = None
    flip_subcase: Optional[str] = None
    common_period: Optional[int] = None
    crossing_power: Optional[int] = None
    crossing_image: Optional[Chord] = None
    interleave_pattern: Optional[int] = None


def _corollary_labels(axis: Chord, moving: Chord) -> Tuple[Angle, Angle, Angle, Angle]:
    """Relabel endpoints as (x, a, y, b) in circular order, x from ``moving``."""
    x, y_candidate = moving.a, moving.b
    inside = []
    outside = []
    for v in axis.endpoints:
        if _positively_oriented(x, v, y_candidate):
            inside.append(v)
        else:
            outside.append(v)
    if len(inside) != 1 or len(outside) != 1:
        raise PreconditionError("not linked")
    return x, inside[0], y_candidate, outside[0]


def classify_accordion(d: int, axis: Chord, moving: Chord) -> AccordionCase:
    """Place a linked, mutually order-preserving pair into its case.

    ``axis`` plays the role of the fixed chord whose accordion is
    examined; ``moving`` the chord whose forward orbit may re-cross it.
    Every case's defining data is verified before being reported, and a
    configuration matching no case raises ``classification impossible``
    — which the underlying result rules out for valid inputs.
    """
    if classify_pair(axis, moving) != PairClass.LINKED:
        raise PreconditionError("not linked")
    rep = mutually_order_preserving(d, axis, moving)
    if not rep.ok:
        raise PreconditionError(
            f"mutually order preserving accordions required ({rep.reason})"
        )
    x, a, y, b = _corollary_labels(axis, moving)
    orbit = _distinct_orbit_chords(d, moving)
    crossing = [c for c in orbit if classify_pair(c, axis) == PairClass.LINKED]
    if len(crossing) > 2:
        raise PreconditionError(
            "classification impossible: three distinct orbit images cross the axis"
        )
    if len(crossing) == 2:
        other = next(c for c in crossing if c != moving)
        # Minimal positive power carrying the chord onto the second
        # crossing image, tracking endpoints individually.
        xi, yi = x, y
        i = 0
        while True:
            xi, yi = sigma(d, xi), sigma(d, yi)
            i += 1
            if Chord(xi, yi) == other:
                break
            if i > len(orbit) + 2:
                raise PreconditionError(
                    "classification impossible: crossing image unreachable"
                )
        pattern = _interleave_pattern(x, a, y, b, xi, yi)
        if pattern is None:
            raise PreconditionError(
                "classification impossible: case-4 images do not interleave"
            )
        return AccordionCase(case_id=4, crossing_power=i, crossing_image=other,
                             interleave_pattern=pattern)

    info = leaf_orbit(d, moving)
    if info.preperiod != 0:
        # The orbit never returns to the only crossing chord: case 1.
        return AccordionCase(case_id=1)

    # The moving chord is periodic as a set.  Same orbit for x and y?
    j = None
    t = x
    for step in range(1, info.period * 2 + 1):
        t = sigma(d, t)
        if t == y:
            j = step
            break
    if j is not None:
        if _iterate_angle(d, y, j) != x:
            raise PreconditionError(
                "classification impossible: power sends x to y but not y to x"
            )
        if _iterate_angle(d, a, 2 * j) != a or _iterate_angle(d, b, 2 * j) != b:
            raise PreconditionError(
                "classification impossible: axis endpoints not fixed by the double flip power"
            )
        aj, bj = _iterate_angle(d, a, j), _iterate_angle(d, b, j)
        if aj == b and bj == a:
            sub = "endpoint-flip"
        elif aj != b and bj != a and _same_side(x, y, a, bj) and _same_side(x, y, b, aj):
            # a with the j-th image of b on one side of the orbit chord,
            # b with the j-th image of a on the other; the two sides are
            # automatically distinct since the pair is linked.
            sub = "separation"
        else:
            raise PreconditionError(
                "classification impossible: flip case without a valid sub-case"
            )
        return AccordionCase(case_id=2, flip_power=j, flip_subcase=sub)

    # Distinct orbits for x and y: case 3.
    periods = {v: angle_orbit(d, v) for v in (a, b, x, y)}
    if any(p.preperiod != 0 for p in periods.values()):
        raise PreconditionError(
            "classification impossible: periodic chord with non-periodic endpoint"
        )
    ps = {p.period for p in periods.values()}
    if len(ps) != 1:
        raise PreconditionError(
            "classification impossible: endpoint periods differ in case 3"
        )
    if set(periods[a].orbit) == set(periods[b].orbit):
        raise PreconditionError(
            "classification impossible: axis endpoints share an orbit in case 3"
        )
    return AccordionCase(case_id=3, common_period=ps.pop())


def _iterate_angle(d: int, v: Angle, n: int) -> Angle:
    return v.times(pow(d, n))


def _same_side(x: Angle, y: Angle, p: Angle, q: Angle) -> bool:
    """p and q lie strictly on one side of the chord {x, y}."""
    if p in (x, y) or q in (x, y):
        return False
    return _positively_oriented(x, p, y) == _positively_oriented(x, q, y)


def _interleave_pattern(x, a, y, b, xi, yi) -> Optional[int]:
    """Match the two admissible case-4 configurations.

    Pattern 1: x < a < y <= xi < b < yi <= x (circularly from x);
    pattern 2: x <= yi < a < xi <= y < b.  Positions are measured
    counterclockwise from x.
    """
    def pos(t: Angle) -> Fraction:
        return (t.value - x.value) % 1

    def pos_hi(t: Angle) -> Fraction:
        p = pos(t)
        return p if p != 0 else Fraction(1)

    if pos(a) < pos(y) <= pos(xi) < pos(b) < pos_hi(yi):
        return 1
    if pos(yi) < pos(a) < pos(xi) <= pos(y) < pos(b):
        return 2
    return None


# ---------------------------------------------------------------------------
# Joint orbit structure of the convex hull


@dataclass(frozen=True)
class JointOrbitStructure:
    """Orbit analysis of B = hull(axis ∪ moving chord).

    ``verdict`` is ``all-disjoint`` when the distinct forward images of
    B are pairwise disjoint closed sets, else ``periodic-structure``
    with ``r`` the first index whose image's interior meets another
    image.  In the periodic case ``components`` are the connected
    pieces of the union of images from index r on, each verified to
    have sigma_d order preserving on its vertices; ``component_periods``
    are their first-return times, ``vertex_orbit_count`` the number of
    distinct periodic orbits among the vertices of the r-th image, and
    ``eventual_period`` the common eventual endpoint period of the two
    chords.
    """

    verdict: str
    images: Tuple[ConvexSet, ...]
    r: Optional[int] = None
    components: Tuple[ConvexSet, ...] = ()
    component_periods: Tuple[int, ...] = ()
    vertex_orbit_count: Optional[int] = None
    eventual_period: Optional[int] = None


def joint_orbit_structure(d: int, axis: Chord, moving: Chord) -> JointOrbitStructure:
    """Classify the forward orbit of the joint hull of a linked pair.

    Requires the pair to be linked with mutually order preserving
    accordions.  The scan is exact: hull images are iterated until the
    vertex set repeats; every structural property reported (order
    preservation per component, common vertex period, 2-4 orbits,
    identity return map only on a lone quadrilateral) is checked, not
    assumed.
    """
    if classify_pair(axis, moving) != PairClass.LINKED:
        raise PreconditionError("not linked")
    rep = mutually_order_preserving(d, axis, moving)
    if not rep.ok:
        raise PreconditionError(
            f"mutually order preserving accordions required ({rep.reason})"
        )
    hulls: List[ConvexSet] = []
    seen: Dict[FrozenSet[Angle], int] = {}
    vs = tuple(sorted(set(axis.endpoints) | set(moving.endpoints)))
    while frozenset(vs) not in seen:
        seen[frozenset(vs)] = len(hulls)
        hulls.append(convex_hull(vs))
        vs = tuple(sorted({sigma(d, v) for v in vs}))
    reentry = seen[frozenset(vs)]

    r = None
    for i, h in enumerate(hulls):
        if any(hulls_interiors_intersect(h, g)
               for j, g in enumerate(hulls) if j != i):
            r = i
            break
    if r is None:
        # No interior overlap anywhere; hulls touching at a vertex still
        # break pairwise disjointness, so the periodic machinery applies
        # from the first touching index.
        for i, h in enumerate(hulls):
            if any(hulls_touch_or_intersect(h, g)
                   for j, g in enumerate(hulls) if j != i):
                r = i
                break
    if r is None and reentry == 0:
        # The initial hull itself recurs: a later image coincides with
        # it, which is the periodic situation even though the distinct
        # images are pairwise disjoint sets.
        r = 0
    if r is None:
        # The orbit falls into a cycle of hulls that never meet each
        # other nor the preperiodic images: every pair of distinct
        # images is disjoint.
        return JointOrbitStructure(verdict="all-disjoint", images=tuple(hulls))

    tail = hulls[r:]
    # Connected components of the union of the tail images.
    comp_id = list(range(len(tail)))
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            if comp_id[j] != comp_id[i] and hulls_touch_or_intersect(tail[i], tail[j]):
                old = comp_id[j]
                comp_id = [comp_id[i] if c == old else c for c in comp_id]
    comp_vertices: Dict[int, set] = {}
    for idx, h in enumerate(tail):
        comp_vertices.setdefault(comp_id[idx], set()).update(vertices_of(h))
    components = sorted(
        (convex_hull(vset) for vset in comp_vertices.values()),
        key=lambda p: vertices_of(p)[0],
    )

    periods = []
    for comp in components:
        cvs = frozenset(vertices_of(comp))
        bad = order_preserving_on(d, tuple(cvs))
        if bad is not None:
            raise PreconditionError(
                f"joint orbit component violates order preservation: {bad}"
            )
        n = 1
        cur = frozenset(sigma(d, v) for v in cvs)
        limit = sum(
            angle_orbit(d, v).preperiod + angle_orbit(d, v).period for v in cvs
        ) + len(cvs) + 1
        while cur != cvs:
            cur = frozenset(sigma(d, v) for v in cur)
            n += 1
            if n > limit:
                raise PreconditionError(
                    "joint orbit component never returns to itself"
                )
        periods.append(n)
        identity = all(_iterate_angle(d, v, n) == v for v in cvs)
        if identity:
            # An identity first-return map is only legitimate on a
            # component that is a single unmerged quadrilateral image.
            single_image = any(cvs == frozenset(vertices_of(h)) for h in tail)
            if not (single_image and len(cvs) == 4):
                raise PreconditionError(
                    "identity return map on a component that is not a lone quadrilateral"
                )

    base = vertices_of(tail[0])
    infos = [angle_orbit(d, v) for v in base]
    if any(i.preperiod != 0 for i in infos):
        raise PreconditionError("vertices of the r-th image are not periodic")
    vperiods = {i.period for i in infos}
    if len(vperiods) != 1:
        raise PreconditionError("vertices of the r-th image have unequal periods")
    orbits = {frozenset(i.cycle()) for i in infos}
    if len(orbits) not in (2, 3, 4):
        raise PreconditionError(
            f"vertex orbits number {len(orbits)}, expected 2, 3 or 4"
        )
    # Endpoints may be preperiodic; compare their eventual cycle periods.
    eventual = {angle_orbit(d, v).period for v in
                (axis.a, axis.b, moving.a, moving.b)}
    if len(eventual) != 1:
        raise PreconditionError("chords have different eventual endpoint periods")
    return JointOrbitStructure(
        verdict="periodic-structure",
        images=tuple(hulls),
        r=r,
        components=tuple(components),
        component_periods=tuple(periods),
        vertex_orbit_count=len(orbits),
        eventual_period=eventual.pop(),
    )
