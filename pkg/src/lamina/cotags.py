"""Co-critical sets and tags for cubic (degree-3) critical data.

A degree-two critical set of the tripling map uses up two of the three
preimages of each of its image points; the third preimages, taken
together, span the co-critical set.  Rotating a co-critical set by one
third and by two thirds and taking the convex hull recovers the original
critical set exactly, which is why ordered pairs of co-critical sets
("tags") can stand in for bicritical laminations: the containment and
disjointness structure of the tags mirrors that of the laminations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .circle import (
    Angle,
    Chord,
    ConvexSet,
    PairClass,
    Polygon,
    circular_distance,
    classify_pair,
    convex_hull,
    is_critical,
    sigma,
    vertices_of,
)
from .errors import PreconditionError
from .lamination import gap_degree
from .orbits import hulls_touch_or_intersect

__all__ = [
    "CUBIC",
    "AdmissibleCriticalSet",
    "CoTag",
    "UscReport",
    "cocritical_set",
    "rotate",
    "reconstruct_from_cocritical",
    "cotag",
    "tags_relation",
    "usc_witness_check",
]

CUBIC = 3


def _boundary(s: Union[Polygon, Chord]) -> Tuple[Chord, ...]:
    if isinstance(s, Polygon):
        return s.edges()
    return (s,)


class AdmissibleCriticalSet:
    """A degree-two critical set for the tripling map.

    Construction validates admissibility and computes the co-critical
    set once: the vertices must map exactly two-to-one, the covering
    degree must be two (a critical leaf counts), and the convex hull of
    the left-over third preimages must not cross the set itself.
    """

    __slots__ = ("_set", "_cocritical")

    def __init__(self, s: Union[Polygon, Chord]):
        if isinstance(s, Chord):
            if s.is_degenerate():
                raise PreconditionError("inadmissible: degenerate chord")
            if not is_critical(CUBIC, s):
                raise PreconditionError(
                    f"inadmissible: {s} is not critical for degree {CUBIC}"
                )
            vs: Tuple[Angle, ...] = s.endpoints
        elif isinstance(s, Polygon):
            vs = s.vertices
            fibers: Dict[Angle, List[Angle]] = {}
            for v in vs:
                fibers.setdefault(sigma(CUBIC, v), []).append(v)
            for img, fib in fibers.items():
                if len(fib) != 2:
                    raise PreconditionError(
                        f"inadmissible: sigma_{CUBIC} is not two-to-one on the "
                        f"vertices (image {img} has {len(fib)} preimages in the set)"
                    )
            deg = gap_degree(CUBIC, s)
            if deg != 2:
                raise PreconditionError(
                    f"inadmissible: covering degree {deg}, need 2"
                )
        else:
            raise PreconditionError(
                f"critical set must be a chord or polygon, got {type(s).__name__}"
            )

        vertex_set = set(vs)
        outside = []
        for img in sorted({sigma(CUBIC, v) for v in vs}):
            missing = [
                p
                for k in range(CUBIC)
                for p in (Angle(Fraction(img.value + k, CUBIC)),)
                if p not in vertex_set
            ]
            if len(missing) != 1:
                raise PreconditionError(
                    f"inadmissible: image {img} leaves {len(missing)} preimages "
                    "outside the set, expected exactly one"
                )
            outside.append(missing[0])
        coc = convex_hull(outside)

        if not isinstance(coc, Angle):
            for e in _boundary(coc):
                for f in _boundary(s):
                    if classify_pair(e, f) == PairClass.LINKED:
                        raise PreconditionError(
                            "inadmissible: co-critical hull is linked with the set"
                        )
        object.__setattr__(self, "_set", s)
        object.__setattr__(self, "_cocritical", coc)

    def __setattr__(self, name, value):
        raise AttributeError("AdmissibleCriticalSet is immutable")

    @property
    def set(self) -> Union[Polygon, Chord]:
        return self._set

    @property
    def cocritical(self) -> ConvexSet:
        return self._cocritical

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AdmissibleCriticalSet) and self._set == other._set
        )

    def __hash__(self) -> int:
        return hash(("AdmissibleCriticalSet", self._set))

    def __repr__(self) -> str:
        return f"AdmissibleCriticalSet({self._set!r})"


CriticalInput = Union[AdmissibleCriticalSet, Polygon, Chord]


def _admissible(c: CriticalInput) -> AdmissibleCriticalSet:
    if isinstance(c, AdmissibleCriticalSet):
        return c
    return AdmissibleCriticalSet(c)


def cocritical_set(c: CriticalInput) -> ConvexSet:
    """Convex hull of the third preimages left outside the critical set.

    A critical leaf yields a point; a collapsing quadrilateral yields a
    leaf; a degree-two 2k-gon yields a k-gon.
    """
    return _admissible(c).cocritical


def rotate(t: ConvexSet, k: int) -> ConvexSet:
    """Rotate a point, chord, or polygon by k thirds of a full turn."""
    if k not in (1, 2):
        raise PreconditionError(f"rotation step must be 1 or 2 thirds, got {k}")
    shift = Fraction(k, CUBIC)
    return convex_hull(v + shift for v in vertices_of(t))


def reconstruct_from_cocritical(s: ConvexSet) -> ConvexSet:
    """Recover a critical set from its co-critical set.

    The hull of the two rotated copies s(1/3) and s(2/3); for the
    co-critical set of an admissible critical set this is the original
    set exactly.
    """
    pts = [v for v in vertices_of(rotate(s, 1))]
    pts.extend(vertices_of(rotate(s, 2)))
    return convex_hull(pts)


@dataclass(frozen=True)
class CoTag:
    """Ordered product of two co-critical sets."""

    first: ConvexSet
    second: ConvexSet


def cotag(c1: CriticalInput, c2: CriticalInput) -> CoTag:
    """The ordered tag (coc(c1), coc(c2)) of two unlinked critical sets."""
    a1, a2 = _admissible(c1), _admissible(c2)
    if a1.set == a2.set:
        raise PreconditionError("critical sets must be distinct")
    for e in _boundary(a1.set):
        for f in _boundary(a2.set):
            if classify_pair(e, f) == PairClass.LINKED:
                raise PreconditionError("critical sets are linked")
    return CoTag(first=a1.cocritical, second=a2.cocritical)


def tags_relation(t1: CoTag, t2: CoTag) -> str:
    """Classify two tags as "equal", "disjoint", or "overlap".

    Products of convex sets are disjoint exactly when some factor pair
    is, so the decision is factor-wise and exact.  Factors intersect as
    closed subsets of the disk: a shared circle point counts.
    """
    if t1.first == t2.first and t1.second == t2.second:
        return "equal"
    if not hulls_touch_or_intersect(t1.first, t2.first):
        return "disjoint"
    if not hulls_touch_or_intersect(t1.second, t2.second):
        return "disjoint"
    return "overlap"


def _hull_hausdorff(a: ConvexSet, b: ConvexSet) -> Fraction:
    """Hausdorff distance of vertex sets in the arc metric."""
    va, vb = vertices_of(a), vertices_of(b)
    d1 = max(min(circular_distance(x, y) for y in vb) for x in va)
    d2 = max(min(circular_distance(x, y) for y in va) for x in vb)
    return max(d1, d2)


@dataclass(frozen=True)
class UscReport:
    """Finite-scale upper-semicontinuity witness for a tag sequence."""

    ok: bool
    intersects: bool
    included: bool
    trace: Tuple[Fraction, ...]
    violation: Optional[str]


def usc_witness_check(
    sequence: Sequence[CoTag],
    limit: CoTag,
    target: CoTag,
    tolerance: Fraction = Fraction(1, 64),
) -> UscReport:
    """Verify the upper-semicontinuity implication at finite scale.

    The declared sequence must approach the limit monotonically in the
    factor-wise Hausdorff distance, ending within ``tolerance``;
    otherwise the distance trace is reported as an error.  The check
    then asserts: if the limit tag intersects the target tag, it is
    contained in it factor-wise (vertex containment, which is exact for
    hulls spanned by circle points).
    """
    if not sequence:
        raise PreconditionError("empty tag sequence")
    trace = tuple(
        max(
            _hull_hausdorff(t.first, limit.first),
            _hull_hausdorff(t.second, limit.second),
        )
        for t in sequence
    )
    drifted = any(trace[i + 1] > trace[i] for i in range(len(trace) - 1))
    if drifted or trace[-1] > tolerance:
        shown = ", ".join(str(x) for x in trace)
        raise PreconditionError(
            f"declared sequence does not converge to the limit "
            f"(tolerance {tolerance}): distance trace [{shown}]"
        )
    intersects = tags_relation(limit, target) != "disjoint"
    included = set(vertices_of(limit.first)) <= set(
        vertices_of(target.first)
    ) and set(vertices_of(limit.second)) <= set(vertices_of(target.second))
    ok = included if intersects else True
    return UscReport(
        ok=ok,
        intersects=intersects,
        included=included,
        trace=trace,
        violation=None
        if ok
        else "limit intersects the target tag without being contained in it",
    )
