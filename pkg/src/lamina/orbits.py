"""Forward orbits of angles, chords and polygons under sigma_d.

Rational angles are eventually periodic under multiplication by d, so
every orbit here is finite and computed exactly: an orbit splits into a
preperiodic tail of length ``preperiod`` followed by a cycle of length
``period``.

The module also hosts the quadratic central-strip analysis.  For a chord
ell with 1/3 <= L(ell) < 1/2 (L = length of the shorter subtended arc)
the *central strip* is the region bounded by ell, its translate
ell' = ell + 1/2, and the two circle arcs joining their endpoints.  The
analysis scans the forward orbit of ell under angle doubling and reports
how it first meets that strip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .circle import (
    Angle,
    Arc,
    Chord,
    ConvexSet,
    PairClass,
    Polygon,
    classify_pair,
    convex_hull,
    in_arc,
    sigma,
    sigma_chord,
    vertices_of,
)
from .errors import PreconditionError

__all__ = [
    "OrbitInfo",
    "LeafOrbitInfo",
    "ComponentStructure",
    "CentralStrip",
    "StripVerdict",
    "TransitivityReport",
    "WanderingReport",
    "angle_orbit",
    "leaf_orbit",
    "periodic_components",
    "central_strip",
    "central_strip_analyze",
    "check_gap_transitivity",
    "wandering_check",
    "hulls_interiors_intersect",
    "hulls_touch_or_intersect",
]


@dataclass(frozen=True)
class OrbitInfo:
    """Forward orbit of an angle: tail of length ``preperiod``, then a cycle.

    ``orbit`` lists preperiod + period + 1 entries; the last one repeats
    ``orbit[preperiod]`` to close the cycle, and everything before it is
    pairwise distinct.
    """

    preperiod: int
    period: int
    orbit: Tuple[Angle, ...]

    def is_periodic(self) -> bool:
        return self.preperiod == 0

    def cycle(self) -> Tuple[Angle, ...]:
        return self.orbit[self.preperiod:self.preperiod + self.period]


def angle_orbit(d: int, a: Angle) -> OrbitInfo:
    """Exact forward orbit of ``a`` under sigma_d, through first repetition."""
    seen = {a: 0}
    orbit = [a]
    x = a
    while True:
        x = sigma(d, x)
        orbit.append(x)
        if x in seen:
            first = seen[x]
            break
        seen[x] = len(orbit) - 1
    return OrbitInfo(preperiod=first, period=len(orbit) - 1 - first,
                     orbit=tuple(orbit))


@dataclass(frozen=True)
class LeafOrbitInfo:
    """Forward orbit of a chord, with crossing/collapse diagnostics.

    ``collapses_at`` is the first step whose image is degenerate (the
    chord is then (pre)critical); ``first_linked_pair`` the first (i, j),
    i < j, with the i-th and j-th orbit chords linked.
    """

    preperiod: int
    period: int
    leaves: Tuple[Chord, ...]
    collapses_at: Optional[int]
    first_linked_pair: Optional[Tuple[int, int]]

    @property
    def pairwise_unlinked(self) -> bool:
        return self.first_linked_pair is None

    def cycle(self) -> Tuple[Chord, ...]:
        return self.leaves[self.preperiod:self.preperiod + self.period]


def leaf_orbit(d: int, leaf: Chord) -> LeafOrbitInfo:
    """Forward orbit of a chord as a set sequence, through first repetition.

    Once an image collapses to a point the walk continues through the
    point's angle orbit (a degenerate chord at each step), so the
    preperiod/period bookkeeping stays uniform.
    """
    if leaf.is_degenerate():
        raise PreconditionError("leaf_orbit needs a non-degenerate chord")
    seen = {leaf: 0}
    leaves = [leaf]
    collapses_at = None
    c = leaf
    while True:
        if c.is_degenerate():
            img = sigma(d, c.a)
            nxt = Chord(img, img)
        else:
            nxt = sigma_chord(d, c)
            if nxt.is_degenerate() and collapses_at is None:
                collapses_at = len(leaves)
        leaves.append(nxt)
        if nxt in seen:
            first = seen[nxt]
            break
        seen[nxt] = len(leaves) - 1
        c = nxt
    first_linked = None
    for i in range(len(leaves) - 1):
        if leaves[i].is_degenerate():
            continue
        for j in range(i + 1, len(leaves) - 1):
            if leaves[j].is_degenerate():
                continue
            if classify_pair(leaves[i], leaves[j]) == PairClass.LINKED:
                first_linked = (i, j)
                break
        if first_linked is not None:
            break
    return LeafOrbitInfo(
        preperiod=first,
        period=len(leaves) - 1 - first,
        leaves=tuple(leaves),
        collapses_at=collapses_at,
        first_linked_pair=first_linked,
    )


@dataclass(frozen=True)
class ComponentStructure:
    """Connected components of the union of a periodic chord orbit.

    Each component is a chord or polygon; ``remap_period`` is the least n
    with sigma_d^n fixing the component setwise, and ``transitive`` says
    whether that first-return map is transitive on its vertices.
    """

    components: Tuple[ConvexSet, ...]
    remap_periods: Tuple[int, ...]
    transitive: Tuple[bool, ...]


def periodic_components(d: int, leaf: Chord) -> ComponentStructure:
    """Component structure of the orbit of a chord with periodic endpoints.

    Preconditions follow the concatenation lemmas for invariant
    laminations: both endpoints must be periodic of the same period and
    the orbit chords pairwise unlinked.  Components of the union of the
    orbit are then single chords or polygons, each mapped onto a
    component by sigma_d with a transitive first-return action.
    """
    oa = angle_orbit(d, leaf.a)
    ob = angle_orbit(d, leaf.b)
    if oa.preperiod != 0 or ob.preperiod != 0:
        raise PreconditionError(
            "periodic_components: endpoints must be sigma-periodic "
            "(chord-orbit concatenation requires a periodic leaf)"
        )
    if oa.period != ob.period:
        raise PreconditionError(
            "periodic_components: endpoint periods differ "
            f"({oa.period} != {ob.period}); a periodic leaf has endpoints "
            "of equal period"
        )
    info = leaf_orbit(d, leaf)
    if info.first_linked_pair is not None:
        i, j = info.first_linked_pair
        raise PreconditionError(
            "periodic_components: orbit chords cross "
            f"(steps {i} and {j}); concatenation requires a pairwise "
            "unlinked orbit"
        )
    cycle = list(dict.fromkeys(info.leaves))

    # Union-find over endpoints: chords sharing a vertex concatenate.
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for c in cycle:
        for v in c.endpoints:
            parent.setdefault(v, v)
        union(c.a, c.b)
    groups = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    components = sorted(
        (convex_hull(g) for g in groups.values()),
        key=lambda s: vertices_of(s)[0],
    )

    periods = []
    transitive = []
    for comp in components:
        vset = frozenset(vertices_of(comp))
        n = 1
        cur = frozenset(sigma(d, v) for v in vset)
        while cur != vset:
            cur = frozenset(sigma(d, v) for v in cur)
            n += 1
            if n > d ** (oa.period + 1) + len(cycle) * oa.period:
                raise PreconditionError(
                    "periodic_components: component never returns; "
                    "orbit data is inconsistent"
                )
        periods.append(n)
        # The first-return map should rotate the component's edges
        # transitively; a single chord has one edge and passes trivially.
        edges = list(_edge_chords(vertices_of(comp)))
        m = pow(d, n)
        start = edges[0]
        reached = {start}
        e = start
        for _ in range(len(edges) - 1):
            e = Chord(e.a.times(m), e.b.times(m))
            if e == start:
                break
            reached.add(e)
        transitive.append(len(reached) == len(edges))
    return ComponentStructure(
        components=tuple(components),
        remap_periods=tuple(periods),
        transitive=tuple(transitive),
    )


@dataclass(frozen=True)
class CentralStrip:
    """The quadratic central strip of a chord with 1/3 <= L < 1/2.

    ``leaf`` = {a, b} with the positively oriented arc a -> b the shorter
    one; ``sibling`` = leaf + 1/2 (the other chord with the same image
    under doubling, disjoint from the leaf); the two ``arcs`` join b to
    a + 1/2 and b + 1/2 to a.
    """

    leaf: Chord
    sibling: Chord
    arcs: Tuple[Arc, Arc]

    @property
    def corners(self) -> Tuple[Angle, Angle, Angle, Angle]:
        return (
            self.arcs[0].start, self.arcs[0].end,
            self.arcs[1].start, self.arcs[1].end,
        )

    def chord_in_closed_strip(self, c: Chord) -> bool:
        """Both endpoints in the closed union of the two strip arcs.

        The leaf itself is a strip boundary chord and never counts; its
        sibling does count (as a boundary chord), so that an orbit
        landing exactly on the sibling is visible to the caller.
        """
        if c == self.leaf:
            return False
        return self._in_closed_arcs(c.a) and self._in_closed_arcs(c.b)

    def chord_in_open_strip(self, c: Chord) -> bool:
        return self._in_open_arcs(c.a) and self._in_open_arcs(c.b)

    def chord_separates(self, c: Chord) -> bool:
        """Whether the chord has one endpoint in each open strip arc,
        so it separates the leaf from its sibling inside the strip."""
        s0, s1 = self.arcs
        return (s0.contains(c.a) and s1.contains(c.b)) or (
            s0.contains(c.b) and s1.contains(c.a)
        )

    def _in_closed_arcs(self, x: Angle) -> bool:
        return (
            self.arcs[0].contains(x)
            or self.arcs[1].contains(x)
            or x in self.corners
        )

    def _in_open_arcs(self, x: Angle) -> bool:
        return self.arcs[0].contains(x) or self.arcs[1].contains(x)


def central_strip(leaf: Chord) -> CentralStrip:
    """Build the central strip of a quadratic chord; checks the length gate."""
    L = min((leaf.b.value - leaf.a.value) % 1, (leaf.a.value - leaf.b.value) % 1)
    if not (Fraction(1, 3) <= L < Fraction(1, 2)):
        raise PreconditionError(
            f"length out of range: central strip needs 1/3 <= L < 1/2, got {L}"
        )
    # Orient so the arc a -> b (positively) is the shorter side.
    a, b = leaf.a, leaf.b
    if (b.value - a.value) % 1 > Fraction(1, 2):
        a, b = b, a
    half = Fraction(1, 2)
    sibling = Chord(a + half, b + half)
    arcs = (Arc(b, a + half), Arc(b + half, a))
    return CentralStrip(leaf=leaf, sibling=sibling, arcs=arcs)


@dataclass(frozen=True)
class StripVerdict:
    """Outcome of the central-strip scan.

    kind is one of:

    * ``never-enters``   -- no forward image ever lies in the closed strip;
    * ``enters``         -- first entry at ``step`` lands strictly inside
                            the open strip; ``separates`` reports whether it
                            separates the leaf from its sibling there;
    * ``boundary-hit``   -- first entry at ``step`` touches the strip
                            boundary (a corner point, or the sibling chord
                            itself).
    """

    kind: str
    strip: CentralStrip
    step: Optional[int] = None
    image: Optional[Chord] = None
    separates: Optional[bool] = None
    orbit: Tuple[Chord, ...] = field(default=())


def central_strip_analyze(leaf: Chord) -> StripVerdict:
    """Scan the doubling orbit of ``leaf`` for its first central-strip entry.

    The scan walks the exact forward orbit under angle doubling until the
    orbit repeats.  The image equal to the leaf itself is a strip
    boundary chord and never counts as an entry; an image equal to the
    sibling, or touching a strip corner, is a boundary hit.
    """
    strip = central_strip(leaf)
    d = 2
    seen = {leaf: 0}
    orbit = [leaf]
    c = leaf
    k = 0
    while True:
        c = sigma_chord(d, c)
        k += 1
        if strip.chord_in_closed_strip(c):
            if strip.chord_in_open_strip(c):
                return StripVerdict(
                    kind="enters", strip=strip, step=k, image=c,
                    separates=strip.chord_separates(c), orbit=tuple(orbit),
                )
            return StripVerdict(
                kind="boundary-hit", strip=strip, step=k, image=c,
                orbit=tuple(orbit),
            )
        if c in seen:
            return StripVerdict(kind="never-enters", strip=strip,
                                orbit=tuple(orbit))
        seen[c] = k
        orbit.append(c)


@dataclass(frozen=True)
class TransitivityReport:
    """First-return action of sigma_d on a periodic polygon's vertices."""

    period: int
    vertex_cycles: Tuple[Tuple[Angle, ...], ...]
    transitive: bool
    is_fixed_d_gon: bool
    within_orbit_bound: bool


def check_gap_transitivity(d: int, poly: ConvexSet) -> TransitivityReport:
    """Analyze the vertex dynamics of a setwise-periodic finite gap.

    The polygon must return to itself under some power of sigma_d; the
    report records the vertex cycles of that first-return map.  For an
    invariant lamination's finite periodic gap the expected structure is:
    either a d-gon whose vertices are all fixed by the return map, or at
    most d - 1 vertex cycles; for d = 2 the action is transitive.
    """
    vset = frozenset(vertices_of(poly))
    if len(vset) < 3:
        raise PreconditionError("gap transitivity needs >= 3 vertices")
    bound = max(len(vset), 1) * max(
        angle_orbit(d, v).preperiod + angle_orbit(d, v).period for v in vset
    )
    hulls = [convex_hull(vset)]
    n = 1
    cur = frozenset(sigma(d, v) for v in vset)
    while cur != vset:
        if n > bound:
            raise PreconditionError(
                "check_gap_transitivity: polygon is not setwise periodic"
            )
        img = convex_hull(cur)
        for i, h in enumerate(hulls):
            if hulls_interiors_intersect(h, img):
                raise PreconditionError(
                    "check_gap_transitivity: images at steps "
                    f"{i} and {n} have overlapping interiors; the gap is "
                    "not stand-alone periodic"
                )
        hulls.append(img)
        cur = frozenset(sigma(d, v) for v in cur)
        n += 1
    # Vertex cycles of the first-return map x -> d^n x.
    remaining = set(vset)
    cycles = []
    m = pow(d, n)
    while remaining:
        start = min(remaining)
        cyc = [start]
        remaining.discard(start)
        x = start.times(m)
        while x != start:
            cyc.append(x)
            remaining.discard(x)
            x = x.times(m)
        cycles.append(tuple(cyc))
    cycles.sort(key=lambda cyc: cyc[0])
    transitive = len(cycles) == 1
    fixed_d_gon = len(vset) == d and all(len(c) == 1 for c in cycles)
    return TransitivityReport(
        period=n,
        vertex_cycles=tuple(cycles),
        transitive=transitive,
        is_fixed_d_gon=fixed_d_gon,
        within_orbit_bound=fixed_d_gon or len(cycles) <= d - 1,
    )


# ---------------------------------------------------------------------------
# Hull intersection helpers (shared with the joint-orbit machinery).

def hulls_interiors_intersect(p: ConvexSet, q: ConvexSet) -> bool:
    """Whether the interiors (in the disk) of two vertex hulls intersect.

    Both hulls are spanned by circle points, so their interiors are
    disjoint exactly when all vertices of one lie in a single closed hole
    of the other.  Chords and points have empty interior.
    """
    pv, qv = vertices_of(p), vertices_of(q)
    if len(pv) < 3 or len(qv) < 3:
        return False
    return not (_inside_one_closed_hole(pv, qv)
                or _inside_one_closed_hole(qv, pv))


def hulls_touch_or_intersect(p: ConvexSet, q: ConvexSet) -> bool:
    """Whether two vertex hulls intersect at all (closed sets in the disk).

    Circle-spanned hulls meet iff they share a vertex or some edges cross.
    """
    pv, qv = vertices_of(p), vertices_of(q)
    if set(pv) & set(qv):
        return True
    for e in _edge_chords(pv):
        for f in _edge_chords(qv):
            if classify_pair(e, f) == PairClass.LINKED:
                return True
    return False


def _edge_chords(vs: Sequence[Angle]):
    if len(vs) == 1:
        return ()
    if len(vs) == 2:
        return (Chord(vs[0], vs[1]),)
    return tuple(Chord(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))


def _inside_one_closed_hole(host: Sequence[Angle], guest: Sequence[Angle]) -> bool:
    """All of ``guest`` inside one closed hole [v_i, v_{i+1}] of ``host``."""
    n = len(host)
    for i in range(n):
        lo, hi = host[i], host[(i + 1) % n]
        if all(g == lo or g == hi or in_arc(lo, hi, g) for g in guest):
            return True
    return False


@dataclass(frozen=True)
class WanderingReport:
    """Forward-image disjointness scan for a polygon (wandering check)."""

    verdict: str  # 'periodic' | 'collides' | 'wandering-up-to-horizon'
    first_collision: Optional[Tuple[int, int]]
    horizon: int


def wandering_check(d: int, poly: ConvexSet, horizon: int = 64) -> WanderingReport:
    """Scan forward images of a polygon for interior collisions.

    A polygon "wanders" while its forward images have pairwise disjoint
    interiors and never return setwise.  The scan stops at the first
    setwise repetition (verdict ``periodic``), the first pair of images
    with overlapping interiors (``collides``), or the horizon.
    """
    hulls = [convex_hull(vertices_of(poly))]
    seen = {frozenset(vertices_of(poly)): 0}
    for k in range(1, horizon + 1):
        nxt = convex_hull(sigma(d, v) for v in vertices_of(hulls[-1]))
        key = frozenset(vertices_of(nxt))
        if key in seen:
            return WanderingReport("periodic", None, k)
        for i, h in enumerate(hulls):
            if hulls_interiors_intersect(h, nxt):
                return WanderingReport("collides", (i, k), k)
        seen[key] = k
        hulls.append(nxt)
    return WanderingReport("wandering-up-to-horizon", None, horizon)
