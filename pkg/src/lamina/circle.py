"""Exact geometry of points, chords and polygons on the unit circle.

The circle is modelled as R/Z: a point ("angle") is a rational number
modulo 1, kept in lowest terms with 0 <= p/q < 1.  All predicates in this
module are decided by exact rational arithmetic; nothing here touches
floating point.  For a degree ``d >= 2`` the basic dynamical map is

    sigma_d : a |-> d*a (mod 1),

which multiplies angles by ``d``.  Chords are unordered pairs of angles,
drawn as straight segments in the closed unit disk; two chords are
*linked* when they cross inside the open disk, which happens exactly when
their endpoints alternate around the circle.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import PreconditionError

__all__ = [
    "Angle",
    "Arc",
    "Chord",
    "Polygon",
    "ConvexSet",
    "PairClass",
    "sigma",
    "sigma_chord",
    "sigma_hull",
    "in_arc",
    "classify_pair",
    "is_critical",
    "leaf_length",
    "convex_hull",
    "strongly_linked",
    "holes",
    "circular_distance",
]


@functools.total_ordering
class Angle:
    """A point of the circle R/Z, stored as a reduced fraction in [0, 1).

    Angles compare in the linear order of [0, 1); circular comparisons go
    through :func:`in_arc`.  Addition and subtraction wrap modulo 1.
    """

    __slots__ = ("_v",)

    def __init__(self, numerator, denominator=None):
        if denominator is None:
            v = Fraction(numerator)
        else:
            v = Fraction(numerator, denominator)
        object.__setattr__(self, "_v", v % 1)

    @property
    def value(self) -> Fraction:
        return self._v

    @property
    def numerator(self) -> int:
        return self._v.numerator

    @property
    def denominator(self) -> int:
        return self._v.denominator

    def times(self, n: int) -> "Angle":
        return Angle(self._v * n)

    def __add__(self, other) -> "Angle":
        return Angle(self._v + _as_fraction(other))

    def __sub__(self, other) -> "Angle":
        return Angle(self._v - _as_fraction(other))

    def __eq__(self, other) -> bool:
        return isinstance(other, Angle) and self._v == other._v

    def __lt__(self, other) -> bool:
        return self._v < other._v

    def __hash__(self) -> int:
        return hash(self._v)

    def __repr__(self) -> str:
        return f"Angle({self._v.numerator}/{self._v.denominator})"

    def __str__(self) -> str:
        return f"{self._v.numerator}/{self._v.denominator}"

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Angle):
        return x.value
    return Fraction(x)


def _as_angle(x) -> Angle:
    return x if isinstance(x, Angle) else Angle(x)


class Chord:
    """An unordered pair of angles; degenerate when the two coincide.

    The lesser endpoint (in the linear order of [0,1)) is stored first, so
    equal chords are identical objects under ``==`` and hashing.
    """

    __slots__ = ("_a", "_b")

    def __init__(self, a, b):
        a, b = _as_angle(a), _as_angle(b)
        if b < a:
            a, b = b, a
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)

    @property
    def a(self) -> Angle:
        return self._a

    @property
    def b(self) -> Angle:
        return self._b

    @property
    def endpoints(self):
        return (self._a, self._b)

    def is_degenerate(self) -> bool:
        return self._a == self._b

    def has_endpoint(self, x: Angle) -> bool:
        return x == self._a or x == self._b

    def other_endpoint(self, x: Angle) -> Angle:
        if x == self._a:
            return self._b
        if x == self._b:
            return self._a
        raise PreconditionError(f"{x} is not an endpoint of {self}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chord)
            and self._a == other._a
            and self._b == other._b
        )

    def __lt__(self, other) -> bool:
        return (self._a, self._b) < (other._a, other._b)

    def __le__(self, other) -> bool:
        return (self._a, self._b) <= (other._a, other._b)

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __repr__(self) -> str:
        return f"Chord({self._a}, {self._b})"

    def __str__(self) -> str:
        return f"{self._a} {self._b}"

    def __setattr__(self, name, value):
        raise AttributeError("Chord is immutable")


class Polygon:
    """A convex polygon inscribed in the circle: >= 3 distinct vertices.

    Vertices are stored in the canonical rotation: ascending from the least
    vertex, which is also the positive cyclic order around the circle.
    """

    __slots__ = ("_vertices",)

    def __init__(self, vertices: Iterable):
        vs = sorted({_as_angle(v) for v in vertices})
        if len(vs) < 3:
            raise PreconditionError(
                f"polygon needs >= 3 distinct vertices, got {len(vs)}"
            )
        object.__setattr__(self, "_vertices", tuple(vs))

    @property
    def vertices(self):
        return self._vertices

    def edges(self):
        vs = self._vertices
        return tuple(
            Chord(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))
        )

    def diagonals(self):
        vs = self._vertices
        n = len(vs)
        out = []
        for i in range(n):
            for j in range(i + 2, n):
                if not (i == 0 and j == n - 1):
                    out.append(Chord(vs[i], vs[j]))
        return tuple(out)

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polygon) and self._vertices == other._vertices

    def __hash__(self) -> int:
        return hash(self._vertices)

    def __repr__(self) -> str:
        return "Polygon[" + " ".join(str(v) for v in self._vertices) + "]"

    def __setattr__(self, name, value):
        raise AttributeError("Polygon is immutable")


#: A convex subset of the closed disk spanned by circle points: a single
#: angle, a chord, or a polygon.  Its vertex set determines it completely.
ConvexSet = Union[Angle, Chord, Polygon]


class Arc:
    """An open, positively oriented circular arc from ``start`` to ``end``.

    ``full_circle`` marks the arc running all the way around (start == end
    is rejected otherwise).
    """

    __slots__ = ("_start", "_end", "_full")

    def __init__(self, start, end, full_circle: bool = False):
        start, end = _as_angle(start), _as_angle(end)
        if not full_circle and start == end:
            raise PreconditionError(
                "arc endpoints coincide; pass full_circle=True for the "
                "whole circle"
            )
        object.__setattr__(self, "_start", start)
        object.__setattr__(self, "_end", end)
        object.__setattr__(self, "_full", bool(full_circle))

    @property
    def start(self) -> Angle:
        return self._start

    @property
    def end(self) -> Angle:
        return self._end

    @property
    def full_circle(self) -> bool:
        return self._full

    def length(self) -> Fraction:
        if self._full:
            return Fraction(1)
        return (self._end.value - self._start.value) % 1

    def contains(self, x: Angle) -> bool:
        if self._full:
            return x != self._start
        return in_arc(self._start, self._end, x)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Arc)
            and self._start == other._start
            and self._end == other._end
            and self._full == other._full
        )

    def __hash__(self) -> int:
        return hash((self._start, self._end, self._full))

    def __repr__(self) -> str:
        if self._full:
            return f"Arc({self._start}, full)"
        return f"Arc({self._start}, {self._end})"

    def __setattr__(self, name, value):
        raise AttributeError("Arc is immutable")


class PairClass:
    """The four mutual positions of two non-degenerate chords."""

    EQUAL = "equal"
    DISJOINT = "disjoint"
    TOUCHING = "touching"
    LINKED = "linked"


def sigma(d: int, a: Angle) -> Angle:
    """Multiply the angle by ``d`` modulo 1."""
    _check_degree(d)
    return _as_angle(a).times(d)


def sigma_chord(d: int, c: Chord) -> Chord:
    """Image chord under sigma_d; degenerate when ``c`` is critical."""
    _check_degree(d)
    return Chord(c.a.times(d), c.b.times(d))


def in_arc(start: Angle, end: Angle, x: Angle) -> bool:
    """Whether ``x`` lies in the open positively oriented arc (start, end)."""
    start, end, x = _as_angle(start), _as_angle(end), _as_angle(x)
    if start == end:
        raise PreconditionError("in_arc needs two distinct arc endpoints")
    if start < end:
        return start < x < end
    return x > start or x < end


def circular_distance(a: Angle, b: Angle) -> Fraction:
    """Arc-length metric on R/Z: the length of the shorter arc."""
    t = (_as_angle(a).value - _as_angle(b).value) % 1
    return min(t, 1 - t)


def classify_pair(c1: Chord, c2: Chord) -> str:
    """Classify two non-degenerate chords as equal/disjoint/touching/linked.

    Linked means the endpoints strictly alternate around the circle, i.e.
    the chords cross in the open disk.  Chords sharing an endpoint touch
    and are never linked.  Degenerate input is rejected.
    """
    if c1.is_degenerate() or c2.is_degenerate():
        raise PreconditionError("classify_pair requires non-degenerate chords")
    if c1 == c2:
        return PairClass.EQUAL
    if c1.has_endpoint(c2.a) or c1.has_endpoint(c2.b):
        return PairClass.TOUCHING
    if in_arc(c1.a, c1.b, c2.a) != in_arc(c1.a, c1.b, c2.b):
        return PairClass.LINKED
    return PairClass.DISJOINT


def chords_linked(c1: Chord, c2: Chord) -> bool:
    return classify_pair(c1, c2) == PairClass.LINKED


def chords_disjoint(c1: Chord, c2: Chord) -> bool:
    return classify_pair(c1, c2) == PairClass.DISJOINT


def is_critical(d: int, c: Chord) -> bool:
    """Whether sigma_d collapses the chord to a point."""
    _check_degree(d)
    return ((c.b.value - c.a.value) * d) % 1 == 0 and not c.is_degenerate()


def leaf_length(c: Chord) -> Fraction:
    """Length of the shorter circle arc subtended by the chord."""
    return circular_distance(c.a, c.b)


def convex_hull(points: Iterable) -> ConvexSet:
    """Convex hull of finitely many circle points.

    Every circle point is extreme, so the hull is just the sorted set of
    distinct inputs: an Angle, a Chord, or a Polygon by cardinality.
    """
    vs = sorted({_as_angle(p) for p in points})
    if not vs:
        raise PreconditionError("convex_hull of an empty point set")
    if len(vs) == 1:
        return vs[0]
    if len(vs) == 2:
        return Chord(vs[0], vs[1])
    return Polygon(vs)


def vertices_of(s: ConvexSet) -> tuple:
    """The circle points spanning a convex set, in circular order."""
    if isinstance(s, Angle):
        return (s,)
    if isinstance(s, Chord):
        return (s.a, s.b) if not s.is_degenerate() else (s.a,)
    if isinstance(s, Polygon):
        return s.vertices
    raise PreconditionError(f"not a convex circle set: {s!r}")


def sigma_hull(d: int, s: ConvexSet) -> ConvexSet:
    """Convex hull of the sigma_d-image of the vertex set."""
    return convex_hull(sigma(d, v) for v in vertices_of(s))


def strongly_linked(p: ConvexSet, q: ConvexSet) -> bool:
    """Whether two quadrilaterals (or two chords) have alternating vertices.

    Both arguments must have four vertices, or both two.  A mismatch in
    vertex count, or any shared vertex, gives False; other vertex counts
    are rejected.  For four-vertex polygons the result is True exactly
    when the eight vertices interleave p,q,p,q,... around the circle.
    """
    pv, qv = vertices_of(p), vertices_of(q)
    if len(pv) not in (2, 4) or len(qv) not in (2, 4):
        raise PreconditionError(
            "strongly_linked is defined for chords and quadrilaterals only"
        )
    if len(pv) != len(qv):
        return False
    if set(pv) & set(qv):
        return False
    labelled = sorted([(v, 0) for v in pv] + [(v, 1) for v in qv])
    return all(
        labelled[i][1] != labelled[(i + 1) % len(labelled)][1]
        for i in range(len(labelled))
    )


def holes(s: ConvexSet) -> tuple:
    """The open circle arcs between cyclically adjacent vertices of ``s``."""
    vs = vertices_of(s)
    if len(vs) < 2:
        raise PreconditionError("holes of a single point are the whole circle")
    return tuple(
        Arc(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))
    )


def _check_degree(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise PreconditionError(f"degree must be an integer >= 2, got {d!r}")
