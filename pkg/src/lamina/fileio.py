"""Text formats: angle/chord/polygon literals and the four file kinds.

Angles are written ``p/q`` (never decimals), chords as two angle tokens
separated by whitespace, polygons as a whitespace-separated vertex list.
Files are UTF-8 text with ``#`` comments and a one-line header:

* lamination      -- ``degree d`` or ``degree d depth n``, then one chord
  per line
* critical set    -- ``critical d``, then one chord per line
* quadratic-like portrait -- ``qcportrait d``, then ``quad a b c e`` or
  ``leaf a b`` lines
* tag input       -- no header, exactly two polygon-literal lines

Parsers canonicalize unreduced fractions, report the offending line
number in every error, and invert the matching serializers exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .circle import Angle, Chord, ConvexSet, convex_hull, vertices_of
from .cotags import CoTag
from .errors import ParseError, PreconditionError
from .lamination import FullCriticalCollection, Lamination
from .portrait import CollapsingQuad, QCPortrait

__all__ = [
    "parse_angle",
    "parse_chord",
    "parse_convex",
    "serialize_convex",
    "parse_lamination",
    "serialize_lamination",
    "parse_critical_collection",
    "serialize_critical_collection",
    "parse_portrait",
    "serialize_portrait",
    "parse_tag_input",
    "serialize_tag",
]

_ANGLE_RE = re.compile(r"^\d+/\d+$")


def parse_angle(token: str) -> Angle:
    """Parse an angle literal ``p/q``.

    Only fraction syntax is accepted; decimal forms are rejected so that
    inexact inputs cannot sneak in.  ``p/q`` need not be reduced or lie
    in [0, 1) -- ``14/12`` parses to the same angle as ``1/6``.
    """
    if not _ANGLE_RE.match(token):
        raise ParseError(f"not an angle literal (expected p/q): {token!r}")
    num, den = token.split("/")
    if int(den) == 0:
        raise ParseError(f"zero denominator in angle literal: {token!r}")
    return Angle(Fraction(int(num), int(den)))


def parse_chord(text: str) -> Chord:
    """Parse ``p/q r/s`` into a chord (degenerate if the angles agree)."""
    toks = text.split()
    if len(toks) != 2:
        raise ParseError(f"chord literal needs two angles, got {len(toks)}: {text!r}")
    return Chord(parse_angle(toks[0]), parse_angle(toks[1]))


def parse_convex(text: str) -> ConvexSet:
    """Parse a polygon literal: one angle is a point, two a chord, more a polygon."""
    toks = text.split()
    if not toks:
        raise ParseError("empty polygon literal")
    return convex_hull([parse_angle(t) for t in toks])


def serialize_convex(s: ConvexSet) -> str:
    return " ".join(str(v) for v in vertices_of(s))


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """Strip comments and blanks, keeping 1-based source line numbers."""
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def _chord_on_line(lineno: int, line: str) -> Chord:
    try:
        return parse_chord(line)
    except ParseError as e:
        raise ParseError(f"line {lineno}: {e}") from None


def _header(text: str, keyword: str, kind: str):
    lines = _content_lines(text)
    if not lines:
        raise ParseError(f"empty {kind} file: missing '{keyword} d' header")
    return lines


def parse_lamination(text: str) -> Lamination:
    """Read a lamination file (header ``degree d`` or ``degree d depth n``)."""
    lines = _header(text, "degree", "lamination")
    i, head = lines[0]
    m = re.match(r"^degree\s+(\d+)(?:\s+depth\s+(\d+))?$", head)
    if not m:
        raise ParseError(
            f"line {i}: expected 'degree d' or 'degree d depth n' header, got {head!r}"
        )
    degree = int(m.group(1))
    depth = int(m.group(2)) if m.group(2) is not None else None
    leaves = [_chord_on_line(j, line) for j, line in lines[1:]]
    for (j, _), c in zip(lines[1:], leaves):
        if c.is_degenerate():
            raise ParseError(f"line {j}: degenerate chord {c} cannot be a leaf")
    try:
        return Lamination(degree, leaves, depth_truncation=depth)
    except PreconditionError as e:
        raise ParseError(f"line {i}: {e}") from None


def serialize_lamination(lam: Lamination) -> str:
    head = f"degree {lam.degree}"
    if lam.depth_truncation is not None:
        head += f" depth {lam.depth_truncation}"
    body = "".join(f"{c}\n" for c in lam.sorted_leaves())
    return head + "\n" + body


def parse_critical_collection(text: str) -> FullCriticalCollection:
    """Read a critical-set file (header ``critical d``)."""
    lines = _header(text, "critical", "critical-set")
    i, head = lines[0]
    m = re.match(r"^critical\s+(\d+)$", head)
    if not m:
        raise ParseError(f"line {i}: expected 'critical d' header, got {head!r}")
    degree = int(m.group(1))
    chords = [_chord_on_line(j, line) for j, line in lines[1:]]
    try:
        return FullCriticalCollection(degree, chords)
    except PreconditionError as e:
        raise ParseError(f"line {i}: {e}") from None


def serialize_critical_collection(fcc: FullCriticalCollection) -> str:
    body = "".join(f"{c}\n" for c in fcc.chords)
    return f"critical {fcc.degree}\n" + body


def parse_portrait(text: str) -> QCPortrait:
    """Read a portrait file (header ``qcportrait d``, quad/leaf lines).

    Only syntax and per-item shape are enforced here; run the portrait
    validator on the result to test the semantic conditions.
    """
    lines = _header(text, "qcportrait", "portrait")
    i, head = lines[0]
    m = re.match(r"^qcportrait\s+(\d+)$", head)
    if not m:
        raise ParseError(f"line {i}: expected 'qcportrait d' header, got {head!r}")
    degree = int(m.group(1))
    items = []
    for j, line in lines[1:]:
        toks = line.split()
        kind, args = toks[0], toks[1:]
        if kind == "quad":
            if len(args) != 4:
                raise ParseError(f"line {j}: quad needs 4 angles, got {len(args)}")
            try:
                quad = convex_hull([parse_angle(t) for t in args])
                items.append(CollapsingQuad(degree, quad))
            except (ParseError, PreconditionError) as e:
                raise ParseError(f"line {j}: {e}") from None
        elif kind == "leaf":
            if len(args) != 2:
                raise ParseError(f"line {j}: leaf needs 2 angles, got {len(args)}")
            items.append(_chord_on_line(j, " ".join(args)))
        else:
            raise ParseError(f"line {j}: expected 'quad' or 'leaf', got {kind!r}")
    try:
        return QCPortrait(degree, items)
    except PreconditionError as e:
        raise ParseError(f"line {i}: {e}") from None


def serialize_portrait(p: QCPortrait) -> str:
    out = [f"qcportrait {p.degree}"]
    for item in p.items:
        if isinstance(item, CollapsingQuad):
            out.append("quad " + " ".join(str(v) for v in item.vertices))
        else:
            out.append(f"leaf {item}")
    return "\n".join(out) + "\n"


def parse_tag_input(text: str) -> Tuple[ConvexSet, ConvexSet]:
    """Read a two-line file of polygon literals.

    The pair is returned as parsed; depending on the command it feeds,
    the lines are either two critical sets (tag computation) or the two
    factors of an already-computed tag.
    """
    lines = _content_lines(text)
    if len(lines) != 2:
        raise ParseError(f"tag input needs exactly 2 lines, got {len(lines)}")
    out = []
    for j, line in lines:
        try:
            out.append(parse_convex(line))
        except ParseError as e:
            raise ParseError(f"line {j}: {e}") from None
    return out[0], out[1]


def serialize_tag(tag: CoTag) -> str:
    return serialize_convex(tag.first) + "\n" + serialize_convex(tag.second) + "\n"
