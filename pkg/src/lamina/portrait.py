"""Critical portraits built from collapsing quadrilaterals and critical leaves.

A degree-d portrait fixes d - 1 critical objects.  Each object is either
a critical leaf (a chord collapsed to a point by sigma_d) or a collapsing
quadrilateral (a 4-gon whose four edges all map onto one non-degenerate
leaf).  Portraits of the same degree can be compared index by index:
associated quadrilaterals may have alternating vertices, or two items may
share critical structure, and the aggregate of those per-index relations
decides whether the portraits are linked, essentially equal, or neither.

The payoff is ``smart_critical_collection``: given a leaf of one portrait's
lamination, pick from the partner portrait a full collection of critical
chords none of which crosses the leaf.  Iterating the multiplication map
while re-picking the collection at every step keeps the map monotone on
accordions, which is what the downstream rigidity arguments consume.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .circle import (
    Angle,
    Chord,
    PairClass,
    Polygon,
    classify_pair,
    is_critical,
    sigma,
    strongly_linked,
)
from .errors import PreconditionError
from .lamination import FullCriticalCollection, Lamination, _has_cycle

__all__ = [
    "CollapsingQuad",
    "PortraitItem",
    "QCPortrait",
    "PortraitReport",
    "LinkageVerdict",
    "is_collapsing_quad",
    "validate_portrait",
    "full_collections",
    "compatible",
    "linkage_verdict",
    "smart_critical_collection",
    "critical_chain",
]


def is_collapsing_quad(d: int, p: Polygon) -> bool:
    """Whether the 4-gon collapses onto a single non-degenerate leaf.

    Opposite vertices must share their sigma_d-image and the two images
    must differ, so that every edge (and both diagonals' endpoints) maps
    into the same two-point leaf.
    """
    vs = p.vertices
    if len(vs) != 4:
        raise PreconditionError(
            f"collapsing quadrilateral needs 4 vertices, got {len(vs)}"
        )
    imgs = [sigma(d, v) for v in vs]
    return imgs[0] == imgs[2] and imgs[1] == imgs[3] and imgs[0] != imgs[1]


@dataclass(frozen=True)
class CollapsingQuad:
    """A collapsing quadrilateral together with the degree it collapses under."""

    degree: int
    quad: Polygon

    def __post_init__(self) -> None:
        if not is_collapsing_quad(self.degree, self.quad):
            raise PreconditionError(
                f"not a collapsing quadrilateral for degree {self.degree}: {self.quad}"
            )

    @property
    def vertices(self) -> Tuple[Angle, ...]:
        return self.quad.vertices

    def edges(self) -> Tuple[Chord, ...]:
        return self.quad.edges()

    def diagonals(self) -> Tuple[Chord, Chord]:
        """Both diagonals; each is a critical chord for the degree."""
        v = self.quad.vertices
        return (Chord(v[0], v[2]), Chord(v[1], v[3]))

    def image(self) -> Chord:
        """The leaf every edge maps onto."""
        v = self.quad.vertices
        return Chord(sigma(self.degree, v[0]), sigma(self.degree, v[1]))

    def __str__(self) -> str:
        return "quad[" + " ".join(str(v) for v in self.quad.vertices) + "]"


PortraitItem = Union[CollapsingQuad, Chord]


def _boundary_chords(item: PortraitItem) -> Tuple[Chord, ...]:
    if isinstance(item, CollapsingQuad):
        return item.edges()
    return (item,)


def _items_linked(i1: PortraitItem, i2: PortraitItem) -> bool:
    return any(
        classify_pair(c1, c2) == PairClass.LINKED
        for c1 in _boundary_chords(i1)
        for c2 in _boundary_chords(i2)
    )


class QCPortrait:
    """An ordered choice of d - 1 collapsing quadrilaterals / critical leaves.

    The constructor performs type-level checks only (item kinds, quad
    degrees agreeing with the portrait degree) so that defective portraits
    can still be built and then diagnosed through ``validate_portrait``.
    """

    __slots__ = ("_degree", "_items")

    def __init__(self, degree: int, items: Sequence[PortraitItem]):
        if not isinstance(degree, int) or degree < 2:
            raise PreconditionError(f"degree must be an integer >= 2, got {degree}")
        tup = tuple(items)
        for i, item in enumerate(tup):
            if isinstance(item, CollapsingQuad):
                if item.degree != degree:
                    raise PreconditionError(
                        f"item {i} collapses under degree {item.degree}, "
                        f"portrait degree is {degree}"
                    )
            elif not isinstance(item, Chord):
                raise PreconditionError(
                    f"item {i} is neither a chord nor a collapsing quadrilateral"
                )
        object.__setattr__(self, "_degree", degree)
        object.__setattr__(self, "_items", tup)

    def __setattr__(self, name, value):
        raise AttributeError("QCPortrait is immutable")

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def items(self) -> Tuple[PortraitItem, ...]:
        return self._items

    def quads(self) -> Tuple[CollapsingQuad, ...]:
        return tuple(i for i in self._items if isinstance(i, CollapsingQuad))

    def selected_leaves(self) -> Tuple[Chord, ...]:
        return tuple(i for i in self._items if isinstance(i, Chord))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QCPortrait):
            return NotImplemented
        return self._degree == other._degree and self._items == other._items

    def __hash__(self) -> int:
        return hash((self._degree, self._items))

    def __repr__(self) -> str:
        inner = ", ".join(str(i) for i in self._items)
        return f"QCPortrait(degree={self._degree}, [{inner}])"


@dataclass(frozen=True)
class PortraitReport:
    """Validation outcome; ``problems`` is empty exactly when valid."""

    valid: bool
    problems: Tuple[str, ...]
    warnings: Tuple[str, ...] = ()


def validate_portrait(
    p: QCPortrait, lamination: Optional[Lamination] = None
) -> PortraitReport:
    """Check the portrait's structural requirements, reporting every failure.

    Checks: item count d - 1; criticality and non-degeneracy of leaf
    items; the collapsing property of quadrilaterals; pairwise
    unlinkedness; no loops among the critical leaves.  When a lamination
    is supplied, additionally require that the convex hull of every
    connected component of that lamination's critical leaves has all its
    edges among the lamination's leaves; without one, that closure
    condition has no referent and is skipped with a warning.
    """
    d = p.degree
    problems: List[str] = []
    warnings: List[str] = []
    if len(p.items) != d - 1:
        problems.append(
            f"expected {d - 1} critical items for degree {d}, got {len(p.items)}"
        )
    for i, item in enumerate(p.items):
        if isinstance(item, Chord):
            if item.is_degenerate():
                problems.append(f"item {i} is a degenerate chord")
            elif not is_critical(d, item):
                problems.append(f"item {i} is not critical for degree {d}")
        else:
            if not is_collapsing_quad(d, item.quad):
                problems.append(f"item {i} is not a collapsing quadrilateral")
    for i, j in itertools.combinations(range(len(p.items)), 2):
        if _items_linked(p.items[i], p.items[j]):
            problems.append(f"items {i} and {j} are linked")
    leaf_items = [i for i in p.items if isinstance(i, Chord) and not i.is_degenerate()]
    if _has_cycle(leaf_items):
        problems.append("critical leaves form a loop")

    if lamination is None:
        warnings.append(
            "critical-leaf component closure not checked without a lamination"
        )
    else:
        for problem in _component_closure_problems(lamination):
            problems.append(problem)
    return PortraitReport(
        valid=not problems, problems=tuple(problems), warnings=tuple(warnings)
    )


def _component_closure_problems(lam: Lamination) -> List[str]:
    """Hull edges of each critical-leaf component must be leaves."""
    crit = [c for c in lam.leaves if is_critical(lam.degree, c)]
    if not crit:
        return []
    parent: Dict[Angle, Angle] = {}

    def find(x: Angle) -> Angle:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in crit:
        for v in c.endpoints:
            parent.setdefault(v, v)
        parent[find(c.a)] = find(c.b)
    groups: Dict[Angle, List[Angle]] = defaultdict(list)
    for v in parent:
        groups[find(v)].append(v)
    problems = []
    for vs in groups.values():
        if len(vs) < 3:
            continue
        hull = Polygon(vs)
        for e in hull.edges():
            if e not in lam.leaves:
                problems.append(
                    f"critical-leaf component hull edge {e} is not a leaf"
                )
    return problems


def full_collections(p: QCPortrait) -> List[FullCriticalCollection]:
    """Every full critical collection obtainable from the portrait.

    One diagonal is chosen in each collapsing quadrilateral and combined
    with all selected critical leaves: 2^(number of quadrilaterals)
    collections, each independently verified loop-free by construction of
    the result type, returned in ascending chord order.
    """
    rep = validate_portrait(p)
    if not rep.valid:
        raise PreconditionError(f"portrait invalid: {rep.problems[0]}")
    leaves = list(p.selected_leaves())
    quads = p.quads()
    out = []
    for choice in itertools.product(*(sorted(q.diagonals()) for q in quads)):
        out.append(FullCriticalCollection(p.degree, leaves + list(choice)))
    out.sort(key=lambda f: f.chords)
    return out


def compatible(item1: PortraitItem, item2: PortraitItem) -> bool:
    """Whether two critical objects share critical structure.

    True exactly when the items are equal, or are quadrilaterals sharing
    a diagonal, or one is a diagonal of the other.
    """
    if isinstance(item1, CollapsingQuad) and isinstance(item2, CollapsingQuad):
        if item1.degree != item2.degree:
            raise PreconditionError(
                f"degree mismatch: {item1.degree} vs {item2.degree}"
            )
        if item1 == item2:
            return True
        return bool(set(item1.diagonals()) & set(item2.diagonals()))
    if isinstance(item1, CollapsingQuad):
        return item2 in item1.diagonals()
    if isinstance(item2, CollapsingQuad):
        return item1 in item2.diagonals()
    return item1 == item2


class ItemRelation:
    """Per-index relation labels between associated portrait items."""

    STRONGLY_LINKED = "strongly-linked"
    COMPATIBLE = "compatible"
    INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class LinkageVerdict:
    """Aggregate relation between two portraits plus per-index detail.

    ``relation`` is "linked" when every index is strongly linked or
    compatible with at least one strongly linked, "essentially-equal"
    when every index is compatible, and "neither" otherwise.
    """

    relation: str
    per_index: Tuple[str, ...]


def linkage_verdict(p1: QCPortrait, p2: QCPortrait) -> LinkageVerdict:
    """Compare two valid portraits of one degree index by index."""
    if p1.degree != p2.degree:
        raise PreconditionError(f"degree mismatch: {p1.degree} vs {p2.degree}")
    for p, which in ((p1, "first"), (p2, "second")):
        rep = validate_portrait(p)
        if not rep.valid:
            raise PreconditionError(f"{which} portrait invalid: {rep.problems[0]}")
    per_index = []
    for c1, c2 in zip(p1.items, p2.items):
        if (
            isinstance(c1, CollapsingQuad)
            and isinstance(c2, CollapsingQuad)
            and strongly_linked(c1.quad, c2.quad)
        ):
            per_index.append(ItemRelation.STRONGLY_LINKED)
        elif compatible(c1, c2):
            per_index.append(ItemRelation.COMPATIBLE)
        else:
            per_index.append(ItemRelation.INCOMPATIBLE)
    if all(r == ItemRelation.COMPATIBLE for r in per_index):
        relation = "essentially-equal"
    elif all(r != ItemRelation.INCOMPATIBLE for r in per_index) and any(
        r == ItemRelation.STRONGLY_LINKED for r in per_index
    ):
        relation = "linked"
    else:
        relation = "neither"
    return LinkageVerdict(relation=relation, per_index=tuple(per_index))


def smart_critical_collection(
    leaf1: Chord,
    p1: Optional[QCPortrait],
    p2: QCPortrait,
    avoid: Optional[Angle] = None,
) -> FullCriticalCollection:
    """Pick from p2 a full critical collection with no chord crossing leaf1.

    Every selected critical leaf of p2 is kept; in each collapsing
    quadrilateral the diagonal unlinked with leaf1 is taken, the smaller
    one when both qualify.  When leaf1 is not a side of a quadrilateral
    shared by both portraits and the designated endpoint (``avoid``,
    defaulting to the smaller endpoint of leaf1) is not an endpoint of a
    selected critical leaf, the choice additionally avoids chords through
    that endpoint.  Passing ``p1=None`` skips the cross-portrait
    preconditions and derives everything from p2 alone.
    """
    d = p2.degree
    if leaf1.is_degenerate():
        raise PreconditionError("leaf must be non-degenerate")
    if p1 is not None:
        verdict = linkage_verdict(p1, p2)
        if verdict.relation == "neither":
            raise PreconditionError(
                "portraits are neither linked nor essentially equal"
            )
        for i, item in enumerate(p1.items):
            if _items_linked(leaf1, item):
                raise PreconditionError(
                    f"leaf is linked with item {i} of its own portrait"
                )
    else:
        rep = validate_portrait(p2)
        if not rep.valid:
            raise PreconditionError(f"portrait invalid: {rep.problems[0]}")

    selected = set(p2.selected_leaves())
    if p1 is not None:
        selected |= set(p1.selected_leaves())
    if leaf1 in selected:
        raise PreconditionError("leaf is a selected critical leaf")

    x = leaf1.a if avoid is None else avoid
    if not leaf1.has_endpoint(x):
        raise PreconditionError(
            f"designated endpoint {x} is not an endpoint of {leaf1}"
        )
    shared_quads = (
        set(p1.quads()) & set(p2.quads()) if p1 is not None else set()
    )
    side_of_shared = any(leaf1 in q.edges() for q in shared_quads)
    avoidance = not side_of_shared and not any(
        c.has_endpoint(x) for c in selected
    )

    chosen: List[Chord] = []
    for i, item in enumerate(p2.items):
        if isinstance(item, Chord):
            if classify_pair(item, leaf1) == PairClass.LINKED:
                raise PreconditionError(
                    "precondition violated: leaf crosses a selected critical leaf"
                )
            chosen.append(item)
            continue
        admissible = [
            c
            for c in sorted(item.diagonals())
            if classify_pair(c, leaf1) != PairClass.LINKED
        ]
        if not admissible:
            raise PreconditionError(
                "precondition violated: leaf crosses both diagonals"
            )
        if avoidance:
            clear = [c for c in admissible if not c.has_endpoint(x)]
            if not clear:
                raise PreconditionError(
                    f"cannot avoid designated endpoint {x} in item {i}"
                )
            admissible = clear
        chosen.append(admissible[0])
    return FullCriticalCollection(d, chosen)


def critical_chain(
    fcc: FullCriticalCollection, a: Angle, x: Angle
) -> Optional[Tuple[Chord, ...]]:
    """A monotone chain of collection chords joining a to x, if one exists.

    The chain's endpoints must advance strictly from a towards x inside
    the positively oriented arc [a, x].  Both points must have equal
    sigma-images (chords of the collection are critical, so any chain
    forces that anyway).  Returns an empty chain for a = x and None when
    the endpoint graph admits no such path.
    """
    d = fcc.degree
    if sigma(d, a) != sigma(d, x):
        raise PreconditionError(f"image mismatch: sigma({a}) != sigma({x})")
    if a == x:
        return ()
    incident: Dict[Angle, List[Chord]] = defaultdict(list)
    for c in fcc.chords:
        incident[c.a].append(c)
        incident[c.b].append(c)
    span = (x.value - a.value) % 1

    def advance(frm: Angle, chain: Tuple[Chord, ...]) -> Optional[Tuple[Chord, ...]]:
        offset = (frm.value - a.value) % 1
        for c in sorted(incident[frm]):
            t = c.other_endpoint(frm)
            if t == x:
                return chain + (c,)
            if offset < (t.value - a.value) % 1 < span:
                # strictly forward of frm, strictly inside [a, x]
                found = advance(t, chain + (c,))
                if found is not None:
                    return found
        return None

    return advance(a, ())
