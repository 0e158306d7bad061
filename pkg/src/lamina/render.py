"""Deterministic SVG pictures of laminations.

The circle R/Z is drawn as the unit circle with angle ``a`` placed at
(cos 2*pi*a, sin 2*pi*a) -- angle zero on the right, angles increasing
counterclockwise.  All arithmetic stays exact until the final
coordinate emission, where floats are printed with six decimals, so
rendering the same lamination twice yields byte-identical output.

Leaves are drawn either as straight segments or as hyperbolic
geodesics: circular arcs meeting the unit circle at right angles.  A
diameter has no such finite arc and degrades to a straight segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .circle import Angle, Chord
from .errors import PreconditionError
from .lamination import Lamination

__all__ = ["RenderStyle", "render_svg"]

_MODES = ("straight", "hyperbolic")


@dataclass(frozen=True)
class RenderStyle:
    """Appearance knobs for :func:`render_svg`."""

    geodesic_mode: str = "straight"
    stroke_width: float = 1.5
    label_angles: bool = False
    image_size: int = 512

    def __post_init__(self):
        if self.geodesic_mode not in _MODES:
            raise PreconditionError(
                f"geodesic_mode must be one of {_MODES}, got {self.geodesic_mode!r}"
            )
        if not isinstance(self.image_size, int) or self.image_size < 64:
            raise PreconditionError(
                f"image_size must be an integer >= 64, got {self.image_size!r}"
            )
        if self.stroke_width <= 0:
            raise PreconditionError("stroke_width must be positive")


def _f(x: float) -> str:
    """Fixed six-decimal float format; normalizes -0.0 away."""
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _unit_point(a: Angle) -> Tuple[float, float]:
    t = 2.0 * math.pi * float(a.value)
    return (math.cos(t), math.sin(t))


class _Frame:
    """Maps mathematical unit-disk coordinates to pixel coordinates."""

    def __init__(self, size: int):
        self.cx = size / 2.0
        self.cy = size / 2.0
        self.radius = size * 0.45

    def pixel(self, p: Tuple[float, float]) -> Tuple[float, float]:
        # SVG's y axis points down; flip so angles run counterclockwise.
        return (self.cx + self.radius * p[0], self.cy - self.radius * p[1])


def _is_diameter(c: Chord) -> bool:
    return (c.b.value - c.a.value) == Fraction(1, 2)


def _geodesic_path(c: Chord, frame: _Frame) -> str:
    """SVG path data for the hyperbolic geodesic between c's endpoints.

    The geodesic lies on the circle orthogonal to the unit circle
    through both endpoints: its center z solves A.z = B.z = 1 for unit
    vectors A, B, giving radius sqrt(|z|^2 - 1).  The drawn arc is the
    minor one, bulging toward the disk center.
    """
    A = _unit_point(c.a)
    B = _unit_point(c.b)
    det = A[0] * B[1] - A[1] * B[0]
    center = ((B[1] - A[1]) / det, (A[0] - B[0]) / det)
    r = math.sqrt(center[0] ** 2 + center[1] ** 2 - 1.0)
    p1 = frame.pixel(A)
    p2 = frame.pixel(B)
    cpx = frame.pixel(center)
    r_px = frame.radius * r
    cross = (p1[0] - cpx[0]) * (p2[1] - cpx[1]) - (p1[1] - cpx[1]) * (p2[0] - cpx[0])
    sweep = 1 if cross > 0 else 0
    return (
        f"M {_f(p1[0])} {_f(p1[1])} "
        f"A {_f(r_px)} {_f(r_px)} 0 0 {sweep} {_f(p2[0])} {_f(p2[1])}"
    )


def render_svg(lam: Lamination, style: Optional[RenderStyle] = None) -> str:
    """Render a lamination to a standalone SVG document string.

    Leaves are emitted in canonical sorted order so equal laminations
    produce identical documents.  An empty lamination yields just the
    circle.
    """
    style = style or RenderStyle()
    size = style.image_size
    frame = _Frame(size)
    sw = _f(style.stroke_width)
    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle cx="{_f(frame.cx)}" cy="{_f(frame.cy)}" r="{_f(frame.radius)}" '
        f'fill="none" stroke="black" stroke-width="{sw}"/>',
    ]
    for c in lam.sorted_leaves():
        if style.geodesic_mode == "hyperbolic" and not _is_diameter(c):
            out.append(
                f'<path d="{_geodesic_path(c, frame)}" fill="none" '
                f'stroke="black" stroke-width="{sw}"/>'
            )
        else:
            p1 = frame.pixel(_unit_point(c.a))
            p2 = frame.pixel(_unit_point(c.b))
            out.append(
                f'<line x1="{_f(p1[0])}" y1="{_f(p1[1])}" '
                f'x2="{_f(p2[0])}" y2="{_f(p2[1])}" '
                f'stroke="black" stroke-width="{sw}"/>'
            )
    if style.label_angles:
        font = _f(size / 32.0)
        for v in lam.endpoints():
            u = _unit_point(v)
            lx, ly = frame.pixel((u[0] * 1.08, u[1] * 1.08))
            out.append(
                f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="{font}" '
                f'text-anchor="middle" dominant-baseline="middle">{v}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
