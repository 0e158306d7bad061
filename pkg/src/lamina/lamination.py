"""Finite laminations of the closed unit disk as first-class values.

A lamination here is a finite set of pairwise unlinked, non-degenerate
chords ("leaves") together with a degree d, closed under the angle map
sigma_d in the forward direction.  Infinite invariant laminations are
represented by finite depth-truncated pullbacks: a lamination may carry
``depth_truncation = n`` meaning "this is the depth-n stage of a pullback
construction", and every invariance check is truncation-aware.

The pullback machinery is driven by a *full critical collection*: d - 1
critical chords, pairwise unlinked, whose endpoint graph is acyclic.
Removing them cuts the disk into d closed regions, and sigma_d maps each
region's circle boundary onto the whole circle.  To make each region a
genuine branch of the inverse (exactly one preimage of every angle per
branch) the regions' circle arcs are taken half-open: each arc between
consecutive critical endpoints, listed counterclockwise, includes its
starting corner and excludes its ending corner.  A critical endpoint
therefore belongs to exactly one branch, and sigma_d restricted to each
branch basis is a bijection onto the circle.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .circle import (
    Angle,
    Arc,
    Chord,
    ConvexSet,
    PairClass,
    classify_pair,
    circular_distance,
    convex_hull,
    is_critical,
    sigma,
    sigma_chord,
)
from .errors import PreconditionError
from .orbits import angle_orbit

__all__ = [
    "Lamination",
    "FullCriticalCollection",
    "Gap",
    "EquivalencePartition",
    "ValidationReport",
    "SiblingReport",
    "PropernessReport",
    "validate",
    "sibling_candidates",
    "disjoint_sibling_collections",
    "check_sibling_invariance",
    "branch_inverse",
    "pullback_generate",
    "gaps",
    "gap_degree",
    "equiv_classes",
    "endpoint_star",
    "is_proper",
    "isolated_leaf_diagnostic",
    "chord_hausdorff",
]


class Lamination:
    """A finite set of pairwise unlinked leaves with a degree.

    Construction only normalizes (dedup, canonical chord order) and
    rejects degenerate chords; semantic health is checked by
    :func:`validate`, so that invalid inputs can still be loaded and
    diagnosed.  Instances are immutable and hashable; generation depths
    and pullback discard logs ride along as non-identity metadata.
    """

    __slots__ = ("_degree", "_leaves", "_depth_truncation", "_depths",
                 "_discards")

    def __init__(
        self,
        degree: int,
        leaves: Iterable[Chord] = (),
        depth_truncation: Optional[int] = None,
        *,
        depths: Optional[Dict[Chord, int]] = None,
        discards: Tuple["PullbackDiscard", ...] = (),
    ):
        if not isinstance(degree, int) or degree < 2:
            raise PreconditionError(f"degree must be an integer >= 2, got {degree}")
        leafset = frozenset(leaves)
        for c in leafset:
            if c.is_degenerate():
                raise PreconditionError(f"degenerate chord {c} cannot be a leaf")
        if depth_truncation is not None and depth_truncation < 0:
            raise PreconditionError("depth_truncation must be >= 0")
        object.__setattr__(self, "_degree", degree)
        object.__setattr__(self, "_leaves", leafset)
        object.__setattr__(self, "_depth_truncation", depth_truncation)
        object.__setattr__(self, "_depths", dict(depths) if depths else None)
        object.__setattr__(self, "_discards", tuple(discards))

    def __setattr__(self, name, value):
        raise AttributeError("Lamination is immutable")

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def leaves(self) -> FrozenSet[Chord]:
        return self._leaves

    @property
    def depth_truncation(self) -> Optional[int]:
        return self._depth_truncation

    @property
    def discards(self) -> Tuple["PullbackDiscard", ...]:
        """Pullback candidates dropped for crossing existing leaves."""
        return self._discards

    def sorted_leaves(self) -> Tuple[Chord, ...]:
        return tuple(sorted(self._leaves))

    def endpoints(self) -> Tuple[Angle, ...]:
        return tuple(sorted({v for c in self._leaves for v in c.endpoints}))

    def generation_depth(self, leaf: Chord) -> Optional[int]:
        """Depth at which a pullback first produced this leaf, if known."""
        if self._depths is None:
            return None
        return self._depths.get(leaf)

    def frontier_leaves(self) -> FrozenSet[Chord]:
        """Leaves of the final pullback generation.

        With recorded generation depths these are the leaves first
        produced at ``depth_truncation``.  For a hand-built truncated
        lamination without depth records, a leaf is taken to be on the
        frontier when no leaf of the set maps onto it — exactly the
        leaves whose preimages the truncation cut off.
        """
        if self._depth_truncation is None:
            return frozenset()
        if self._depths is not None:
            n = self._depth_truncation
            return frozenset(c for c in self._leaves
                             if self._depths.get(c) == n)
        images = {sigma_chord(self._degree, c) for c in self._leaves}
        return frozenset(c for c in self._leaves if c not in images)

    def __contains__(self, chord: Chord) -> bool:
        return chord in self._leaves

    def __len__(self) -> int:
        return len(self._leaves)

    def __iter__(self):
        return iter(self.sorted_leaves())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lamination):
            return NotImplemented
        return (self._degree == other._degree
                and self._leaves == other._leaves
                and self._depth_truncation == other._depth_truncation)

    def __hash__(self) -> int:
        return hash((self._degree, self._leaves, self._depth_truncation))

    def __repr__(self) -> str:
        trunc = (f", depth_truncation={self._depth_truncation}"
                 if self._depth_truncation is not None else "")
        return f"Lamination(degree={self._degree}, {len(self._leaves)} leaves{trunc})"


@dataclass(frozen=True)
class PullbackDiscard:
    """One pullback candidate dropped because it crossed an existing leaf."""

    depth: int
    candidate: Chord
    blocker: Chord


class FullCriticalCollection:
    """d - 1 critical chords cutting the disk into d branch regions.

    Checked on construction: every chord critical for the degree,
    pairwise unlinked, endpoint graph acyclic, and exactly d - 1 chords.
    The induced branch structure (half-open circle bases, one per
    region, numbered by least angle) is computed eagerly.
    """

    __slots__ = ("_degree", "_chords", "_corners", "_arc_region", "_bases")

    def __init__(self, degree: int, chords: Iterable[Chord]):
        if not isinstance(degree, int) or degree < 2:
            raise PreconditionError(f"degree must be an integer >= 2, got {degree}")
        chordlist = tuple(sorted(set(chords)))
        if len(chordlist) != degree - 1:
            raise PreconditionError(
                f"a full critical collection for degree {degree} needs "
                f"{degree - 1} distinct chords, got {len(chordlist)}"
            )
        for c in chordlist:
            if not is_critical(degree, c):
                raise PreconditionError(f"chord {c} is not critical for degree {degree}")
        for c1, c2 in itertools.combinations(chordlist, 2):
            if classify_pair(c1, c2) == PairClass.LINKED:
                raise PreconditionError(f"critical chords {c1} and {c2} cross")
        if _has_cycle(chordlist):
            raise PreconditionError(
                "critical chords form a loop; the endpoint graph must be acyclic"
            )
        object.__setattr__(self, "_degree", degree)
        object.__setattr__(self, "_chords", chordlist)
        self._build_branches()

    def __setattr__(self, name, value):
        raise AttributeError("FullCriticalCollection is immutable")

    def _build_branches(self) -> None:
        corners = sorted({v for c in self._chords for v in c.endpoints})
        n = len(corners)
        # Midpoint representatives of the circle arcs between consecutive
        # corners; two arcs lie in the same region iff no critical chord
        # separates their midpoints.
        mids = []
        for i in range(n):
            lo = corners[i].value
            hi = corners[(i + 1) % n].value
            if hi <= lo:
                hi += 1
            mids.append(Angle(Fraction(lo + hi, 2)))
        region_of_arc = list(range(n))

        def separated(x: Angle, y: Angle) -> bool:
            probe = Chord(x, y)
            return any(classify_pair(probe, c) == PairClass.LINKED
                       for c in self._chords)

        for i in range(n):
            for j in range(i + 1, n):
                if region_of_arc[j] != region_of_arc[i] and not separated(mids[i], mids[j]):
                    old = region_of_arc[j]
                    region_of_arc = [region_of_arc[i] if r == old else r
                                     for r in region_of_arc]
        # Number regions 0..d-1 by the least angle of their circle part.
        labels = sorted(set(region_of_arc))
        if len(labels) != self._degree:
            raise PreconditionError(
                f"critical chords cut the disk into {len(labels)} regions, "
                f"expected {self._degree}"
            )

        # Least angle of each region's half-open circle basis.  The wrap
        # arc [corners[-1], corners[0]) contains 0 unless 0 is itself the
        # excluded end corner.
        leasts = {}
        for lbl in labels:
            vals = []
            for i in range(n):
                if region_of_arc[i] != lbl:
                    continue
                if i == n - 1 and corners[0].value != 0:
                    vals.append(Fraction(0))
                else:
                    vals.append(corners[i].value)
            leasts[lbl] = min(vals)
        order = sorted(labels, key=lambda lbl: leasts[lbl])
        renum = {lbl: k for k, lbl in enumerate(order)}

        bases: List[List[Tuple[Angle, Angle]]] = [[] for _ in labels]
        arc_region = []
        for i in range(n):
            rid = renum[region_of_arc[i]]
            arc_region.append(rid)
            bases[rid].append((corners[i], corners[(i + 1) % n]))
        total = [sum((e.value - s.value) % 1 for s, e in b) for b in bases]
        if any(t != Fraction(1, self._degree) for t in total):
            raise PreconditionError(
                "branch bases do not have length 1/d; critical data is inconsistent"
            )
        object.__setattr__(self, "_corners", tuple(corners))
        object.__setattr__(self, "_arc_region", tuple(arc_region))
        object.__setattr__(self, "_bases", tuple(tuple(b) for b in bases))

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def chords(self) -> Tuple[Chord, ...]:
        return self._chords

    def branch_bases(self) -> Tuple[Tuple[Tuple[Angle, Angle], ...], ...]:
        """Half-open circle arcs [start, end) forming each branch basis."""
        return self._bases

    def branch_of(self, x: Angle) -> int:
        """The branch whose half-open basis contains x."""
        corners = self._corners
        n = len(corners)
        for i in range(n):
            if _in_half_open(corners[i], corners[(i + 1) % n], x):
                return self._arc_region[i]
        raise PreconditionError("branch_of: unreachable for a valid collection")

    def __repr__(self) -> str:
        inner = ", ".join(str(c) for c in self._chords)
        return f"FullCriticalCollection(degree={self._degree}, [{inner}])"


def _in_half_open(s: Angle, e: Angle, x: Angle) -> bool:
    """x in the positively oriented half-open arc [s, e)."""
    if x == s:
        return True
    if x == e:
        return False
    return (x.value - s.value) % 1 < (e.value - s.value) % 1


def _has_cycle(chords: Sequence[Chord]) -> bool:
    parent: Dict[Angle, Angle] = {}

    def find(x: Angle) -> Angle:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in chords:
        for v in c.endpoints:
            parent.setdefault(v, v)
        ra, rb = find(c.a), find(c.b)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


# ---------------------------------------------------------------------------
# Validation and sibling invariance


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of structural validation of a lamination."""

    ok: bool
    first_crossing: Optional[Tuple[Chord, Chord]]
    closure_failures: Tuple[Chord, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate(lam: Lamination) -> ValidationReport:
    """Check pairwise unlinkedness and forward closure.

    Forward closure asks that every leaf's image is again a leaf or a
    point.  A depth-truncated lamination waives that only for its
    frontier leaves (the generation the truncation cut off); for a full
    lamination the check is strict.
    """
    leaves = lam.sorted_leaves()
    crossing = None
    for c1, c2 in itertools.combinations(leaves, 2):
        if classify_pair(c1, c2) == PairClass.LINKED:
            crossing = (c1, c2)
            break
    frontier = lam.frontier_leaves()
    failures = []
    for c in leaves:
        img = sigma_chord(lam.degree, c)
        if img.is_degenerate() or img in lam:
            continue
        if c in frontier:
            continue
        failures.append(c)
    return ValidationReport(
        ok=crossing is None and not failures,
        first_crossing=crossing,
        closure_failures=tuple(failures),
    )


def sibling_candidates(d: int, c: Chord, include_self: bool = True) -> Tuple[Chord, ...]:
    """All chords with the same sigma_d image as ``c``.

    These are the d^2 chords joining a preimage of one image endpoint to
    a preimage of the other; ``c`` itself is among them unless excluded.
    """
    if c.is_degenerate():
        raise PreconditionError("sibling candidates need a non-degenerate chord")
    if is_critical(d, c):
        raise PreconditionError("critical leaf has degenerate image")
    p, q = sigma(d, c.a), sigma(d, c.b)
    pre_p = [Angle(Fraction(p.value + k, d)) for k in range(d)]
    pre_q = [Angle(Fraction(q.value + k, d)) for k in range(d)]
    out = {Chord(x, y) for x in pre_p for y in pre_q}
    if not include_self:
        out.discard(c)
    return tuple(sorted(out))


def disjoint_sibling_collections(d: int, c: Chord) -> List[Tuple[Chord, ...]]:
    """All d-element pairwise-disjoint sets of siblings containing ``c``.

    Collections are returned in lexicographic order of their canonical
    serializations (each collection sorted, collections compared as
    tuples).
    """
    cands = sibling_candidates(d, c, include_self=False)
    out = []
    for combo in itertools.combinations(cands, d - 1):
        chosen = (c,) + combo
        if all(classify_pair(x, y) == PairClass.DISJOINT
               for x, y in itertools.combinations(chosen, 2)):
            out.append(tuple(sorted(chosen)))
    out.sort()
    return out


@dataclass(frozen=True)
class SiblingReport:
    """Truncation-aware sibling-invariance verdict for a lamination.

    The three condition fields list offending leaves: images absent
    (forward closure), leaves with no preimage leaf present, and leaves
    with no full pairwise-disjoint sibling collection inside the
    lamination.  ``waived`` lists frontier leaves exempted from the
    backward conditions by the depth truncation.
    """

    passed: bool
    closure_failures: Tuple[Chord, ...]
    pullback_failures: Tuple[Chord, ...]
    sibling_failures: Tuple[Chord, ...]
    waived: Tuple[Chord, ...]
    collections: Tuple[Tuple[Chord, Tuple[Chord, ...]], ...]

    def __bool__(self) -> bool:
        return self.passed


def check_sibling_invariance(lam: Lamination) -> SiblingReport:
    """Verify the three sibling-invariance conditions on a finite set.

    (1) forward closure; (2) every leaf has a pullback (a leaf mapping
    onto it); (3) every leaf with non-degenerate image belongs to d
    pairwise-disjoint leaves sharing that image.  With a depth
    truncation, (2) and (3) are waived for frontier leaves.  For each
    leaf passing (3) the lexicographically first realizing collection is
    recorded.
    """
    d = lam.degree
    frontier = lam.frontier_leaves()
    closure_failures = []
    pullback_failures = []
    sibling_failures = []
    collections = []
    images = {}
    for c in lam.sorted_leaves():
        images[c] = sigma_chord(d, c)
    preimage_count: Dict[Chord, List[Chord]] = {}
    for c, img in images.items():
        preimage_count.setdefault(img, []).append(c)

    for c in lam.sorted_leaves():
        img = images[c]
        if not img.is_degenerate() and img not in lam and c not in frontier:
            closure_failures.append(c)
        if c in frontier:
            continue
        if c not in preimage_count:
            pullback_failures.append(c)
        if img.is_degenerate():
            continue
        # Condition (3): d pairwise-disjoint leaves of lam with image img,
        # including c.
        mates = [m for m in preimage_count.get(img, []) if m != c]
        found = None
        for combo in itertools.combinations(sorted(mates), d - 1):
            chosen = (c,) + combo
            if all(classify_pair(x, y) == PairClass.DISJOINT
                   for x, y in itertools.combinations(chosen, 2)):
                cand = tuple(sorted(chosen))
                if found is None or cand < found:
                    found = cand
        if found is None:
            sibling_failures.append(c)
        else:
            collections.append((c, found))
    return SiblingReport(
        passed=not (closure_failures or pullback_failures or sibling_failures),
        closure_failures=tuple(closure_failures),
        pullback_failures=tuple(pullback_failures),
        sibling_failures=tuple(sibling_failures),
        waived=tuple(sorted(frontier)),
        collections=tuple(collections),
    )


# ---------------------------------------------------------------------------
# Branches and pullbacks


def branch_inverse(fcc: FullCriticalCollection, a: Angle) -> List[Tuple[int, Angle]]:
    """The d preimages of ``a``, labeled by branch, sorted by branch id.

    Each branch basis contains exactly one preimage (the half-open arcs
    make sigma_d restricted to a branch a bijection onto the circle), so
    the result pairs every branch id 0..d-1 with its unique preimage.
    """
    d = fcc.degree
    out = []
    for k in range(d):
        pre = Angle(Fraction(a.value + k, d))
        out.append((fcc.branch_of(pre), pre))
    out.sort(key=lambda t: t[0])
    if [b for b, _ in out] != list(range(d)):
        raise PreconditionError(
            "branch_inverse: preimages do not hit every branch exactly once; "
            "critical data is inconsistent"
        )
    return out


def pullback_generate(
    fcc: FullCriticalCollection,
    seed: Lamination,
    depth: int,
) -> Lamination:
    """Thurston-style pullback of a seed through critical data.

    Depth 0 is the seed together with the critical chords themselves.
    Each later stage pulls back every leaf added at the previous stage:
    for each branch, the chord joining the branch preimages of the
    leaf's endpoints is added — unless it crosses something already
    present, in which case it is discarded and the discard logged with
    the least crossing chord as blocker (consistent critical data never
    produces such crossings).  Frontier leaves are processed in
    canonical sorted order, branches in id order, so the construction
    is deterministic.
    """
    if depth < 0:
        raise PreconditionError("pullback depth must be >= 0")
    if seed.degree != fcc.degree:
        raise PreconditionError(
            f"seed degree {seed.degree} != critical collection degree {fcc.degree}"
        )
    rep = validate(seed)
    if not rep.ok:
        raise PreconditionError(f"seed lamination is invalid: {rep}")
    for leaf in seed.sorted_leaves():
        for crit in fcc.chords:
            if classify_pair(leaf, crit) == PairClass.LINKED:
                raise PreconditionError(
                    "seed incompatible with critical data: "
                    f"seed leaf {leaf} crosses critical chord {crit}"
                )

    d = fcc.degree
    depths: Dict[Chord, int] = {}
    for c in seed.sorted_leaves():
        depths[c] = 0
    for c in fcc.chords:
        depths.setdefault(c, 0)
    discards: List[PullbackDiscard] = []

    # Sorted endpoint index: a present chord crosses a candidate {x, y}
    # exactly when one of its endpoints lies strictly inside the arc
    # (x, y) and the other strictly outside [x, y], so only endpoints
    # within the candidate's arc ever need inspection.
    endpoint_order: List[Angle] = []
    partners: Dict[Angle, List[Angle]] = {}

    def index_chord(c: Chord) -> None:
        for e, p in ((c.a, c.b), (c.b, c.a)):
            known = partners.get(e)
            if known is None:
                partners[e] = [p]
                bisect.insort(endpoint_order, e)
            else:
                known.append(p)

    def least_blocker(cand: Chord) -> Optional[Chord]:
        lo = bisect.bisect_right(endpoint_order, cand.a)
        hi = bisect.bisect_left(endpoint_order, cand.b)
        blocker = None
        for e in endpoint_order[lo:hi]:
            for p in partners[e]:
                if p < cand.a or p > cand.b:
                    crossing = Chord(e, p)
                    if blocker is None or crossing < blocker:
                        blocker = crossing
        return blocker

    for c in depths:
        index_chord(c)

    frontier = sorted(depths)
    for k in range(1, depth + 1):
        added = []
        for m in frontier:
            inv_a = branch_inverse(fcc, m.a)
            inv_b = branch_inverse(fcc, m.b)
            for (bi, pa), (bj, pb) in zip(inv_a, inv_b):
                assert bi == bj
                cand = Chord(pa, pb)
                if cand in depths:
                    continue
                blocker = least_blocker(cand)
                if blocker is not None:
                    discards.append(PullbackDiscard(k, cand, blocker))
                    continue
                depths[cand] = k
                index_chord(cand)
                added.append(cand)
        frontier = sorted(added)
    return Lamination(
        d,
        depths.keys(),
        depth_truncation=depth,
        depths=depths,
        discards=tuple(discards),
    )


# ---------------------------------------------------------------------------
# Gaps


@dataclass(frozen=True)
class Gap:
    """One face of the disk subdivision induced by a lamination's leaves.

    ``vertices`` lists the corner angles in counterclockwise boundary
    order starting from the least; ``incident_leaves`` the boundary
    edges that are leaves; ``boundary_arcs`` the circle arcs between
    consecutive boundary vertices.  The empty lamination yields the
    single full-disk gap with no vertices.
    """

    vertices: Tuple[Angle, ...]
    incident_leaves: Tuple[Chord, ...]
    boundary_arcs: Tuple[Arc, ...]
    is_full_disk: bool = False
    is_outer_truncation_artifact: bool = False

    @property
    def boundary(self) -> Optional[ConvexSet]:
        """Convex hull of the gap's vertices (None for the full disk)."""
        if not self.vertices:
            return None
        return convex_hull(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


def gaps(lam: Lamination) -> List[Gap]:
    """All faces of the subdivision of the disk by the leaves.

    Faces are traced by a dart walk: circle arcs between consecutive
    endpoints are traversed counterclockwise, chords in both directions,
    and at each endpoint the walk turns to the departure closest in
    clockwise angle to the reversal of the arrival.  Gaps bordered by a
    frontier leaf of a truncated pullback are flagged as truncation
    artifacts — deeper pullback stages would subdivide them.
    """
    verts = lam.endpoints()
    if not verts:
        return [Gap(vertices=(), incident_leaves=(), boundary_arcs=(),
                    is_full_disk=True)]
    nxt_vert = {verts[i]: verts[(i + 1) % len(verts)] for i in range(len(verts))}
    # Darts: ('arc', v) departs v counterclockwise along the circle;
    # ('chord', u, w) departs u along the chord {u, w}.
    darts = [("arc", v) for v in verts]
    star: Dict[Angle, List[Angle]] = {v: [] for v in verts}
    for c in lam.sorted_leaves():
        darts.append(("chord", c.a, c.b))
        darts.append(("chord", c.b, c.a))
        star[c.a].append(c.b)
        star[c.b].append(c.a)

    def successor(dart):
        # Turn at the dart's head: among departures (counterclockwise arc
        # with angular key 0, chords with key = angle to the other end),
        # pick the largest key strictly below the reversed arrival's key.
        # The arc departure always qualifies, so a choice always exists.
        if dart[0] == "arc":
            head = nxt_vert[dart[1]]
            rev_key = Fraction(1)
        else:
            head = dart[2]
            rev_key = (dart[1].value - head.value) % 1
        best_key = Fraction(0)
        best = ("arc", head)
        for w in star[head]:
            key = (w.value - head.value) % 1
            if best_key < key < rev_key:
                best_key = key
                best = ("chord", head, w)
        return best

    unused = set(darts)
    order = sorted(darts, key=_dart_sort_key)
    cursor = 0
    frontier = lam.frontier_leaves()
    out = []
    while unused:
        while order[cursor] not in unused:
            cursor += 1
        start = order[cursor]
        face = []
        dart = start
        while True:
            face.append(dart)
            unused.discard(dart)
            dart = successor(dart)
            if dart == start:
                break
        vseq = [d[1] for d in face]
        least = min(range(len(vseq)), key=lambda i: vseq[i])
        vseq = vseq[least:] + vseq[:least]
        edges = sorted({Chord(d[1], d[2]) for d in face if d[0] == "chord"})
        arcs = tuple(Arc(d[1], nxt_vert[d[1]]) for d in face if d[0] == "arc")
        artifact = (lam.depth_truncation is not None
                    and any(e in frontier for e in edges))
        out.append(Gap(
            vertices=tuple(vseq),
            incident_leaves=tuple(edges),
            boundary_arcs=arcs,
            is_outer_truncation_artifact=artifact,
        ))
    out.sort(key=lambda g: g.vertices)
    return out


def _dart_sort_key(dart):
    if dart[0] == "arc":
        return (dart[1].value, Fraction(-1))
    return (dart[1].value, (dart[2].value - dart[1].value) % 1)


def gap_degree(d: int, g: Gap) -> int:
    """Covering degree of sigma_d on a gap's boundary.

    If the whole boundary collapses to one point the degree is taken to
    be the vertex count (the number of point inverses on the circle);
    otherwise it is the winding number of the image vertex cycle —
    the total fraction of the circle swept by consecutive image gaps.
    """
    vs = g.vertices
    if not vs:
        raise PreconditionError("gap_degree needs a gap with vertices")
    imgs = [sigma(d, v) for v in vs]
    if all(x == imgs[0] for x in imgs):
        return len(vs)
    total = sum(
        (imgs[(i + 1) % len(imgs)].value - imgs[i].value) % 1
        for i in range(len(imgs))
    )
    if total.denominator != 1:
        raise PreconditionError(
            "gap boundary does not map cyclically; vertex order is corrupt"
        )
    return int(total)


# ---------------------------------------------------------------------------
# Equivalence classes, stars, properness, isolation


@dataclass(frozen=True)
class EquivalencePartition:
    """Endpoint classes: connected by finite chains of leaves."""

    classes: Tuple[Tuple[Angle, ...], ...]

    def class_of(self, v: Angle) -> Optional[Tuple[Angle, ...]]:
        for cls in self.classes:
            if v in cls:
                return cls
        return None


def equiv_classes(lam: Lamination) -> EquivalencePartition:
    """Partition leaf endpoints into leaf-chain connected components."""
    parent: Dict[Angle, Angle] = {}

    def find(x: Angle) -> Angle:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in lam.sorted_leaves():
        for v in c.endpoints:
            parent.setdefault(v, v)
        ra, rb = find(c.a), find(c.b)
        if ra != rb:
            parent[ra] = rb
    groups: Dict[Angle, set] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    return EquivalencePartition(classes=tuple(classes))


def endpoint_star(lam: Lamination, v: Angle) -> FrozenSet[Angle]:
    """Second endpoints of all leaves at ``v`` (empty if none)."""
    return frozenset(c.other_endpoint(v) for c in lam.leaves if c.has_endpoint(v))


@dataclass(frozen=True)
class PropernessReport:
    """Verdict on critical leaves/wedges with periodic vertices.

    ``kind`` is ``critical-leaf-periodic-endpoint`` or
    ``critical-wedge-periodic-vertex`` when improper, with the witness
    data attached.
    """

    proper: bool
    kind: Optional[str] = None
    witness_leaf: Optional[Chord] = None
    witness_wedge: Optional[Tuple[Angle, Chord, Chord]] = None

    def __bool__(self) -> bool:
        return self.proper


def is_proper(lam: Lamination) -> PropernessReport:
    """Check for critical leaves with periodic endpoints and critical
    wedges with periodic vertices; either makes the lamination improper."""
    d = lam.degree
    periodic_cache: Dict[Angle, bool] = {}

    def periodic(v: Angle) -> bool:
        if v not in periodic_cache:
            periodic_cache[v] = angle_orbit(d, v).preperiod == 0
        return periodic_cache[v]

    for c in lam.sorted_leaves():
        if is_critical(d, c) and (periodic(c.a) or periodic(c.b)):
            return PropernessReport(
                proper=False,
                kind="critical-leaf-periodic-endpoint",
                witness_leaf=c,
            )
    by_vertex: Dict[Angle, List[Chord]] = {}
    for c in lam.sorted_leaves():
        by_vertex.setdefault(c.a, []).append(c)
        by_vertex.setdefault(c.b, []).append(c)
    for v in sorted(by_vertex):
        if len(by_vertex[v]) < 2 or not periodic(v):
            continue
        for c1, c2 in itertools.combinations(by_vertex[v], 2):
            x, y = c1.other_endpoint(v), c2.other_endpoint(v)
            if sigma(d, x) == sigma(d, y):
                return PropernessReport(
                    proper=False,
                    kind="critical-wedge-periodic-vertex",
                    witness_wedge=(v, c1, c2),
                )
    return PropernessReport(proper=True)


def chord_hausdorff(c1: Chord, c2: Chord) -> Fraction:
    """Hausdorff distance of two chords' endpoint pairs in arc metric."""
    def one_sided(p: Chord, q: Chord) -> Fraction:
        return max(
            min(circular_distance(p.a, q.a), circular_distance(p.a, q.b)),
            min(circular_distance(p.b, q.a), circular_distance(p.b, q.b)),
        )
    return max(one_sided(c1, c2), one_sided(c2, c1))


def isolated_leaf_diagnostic(lam: Lamination, leaf: Chord, eps: Fraction) -> str:
    """Classify a leaf by nearby leaves on each side at scale ``eps``.

    The leaf's two sides are the closed circle arcs it subtends; a side
    is approximated when a distinct leaf with both endpoints on that
    side lies within Hausdorff distance eps.  Returns one of
    ``two-sided-approximated``, ``one-sided``, or
    ``isolated-at-this-depth`` — a finite-depth statement only, since a
    deeper pullback can populate an empty side.
    """
    if leaf not in lam:
        raise PreconditionError("leaf is not in the lamination")
    eps = Fraction(eps)
    side_pos = False
    side_neg = False
    for m in lam.sorted_leaves():
        if m == leaf:
            continue
        if chord_hausdorff(leaf, m) > eps:
            continue
        on_pos = _on_closed_side(leaf.a, leaf.b, m)
        on_neg = _on_closed_side(leaf.b, leaf.a, m)
        if on_pos:
            side_pos = True
        if on_neg:
            side_neg = True
    if side_pos and side_neg:
        return "two-sided-approximated"
    if side_pos or side_neg:
        return "one-sided"
    return "isolated-at-this-depth"


def _on_closed_side(s: Angle, e: Angle, m: Chord) -> bool:
    """Both endpoints of ``m`` in the closed positively oriented arc [s, e]."""
    def inside(x: Angle) -> bool:
        return x == s or x == e or (x.value - s.value) % 1 < (e.value - s.value) % 1
    return inside(m.a) and inside(m.b)
