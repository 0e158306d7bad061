"""Command-line front end.

``lamina`` exposes each library capability as a subcommand working on
the text formats of :mod:`lamina.fileio`.  Structured results are
printed as JSON (sorted keys, two-space indent) so output is
deterministic and machine-checkable; file-shaped results (laminations,
critical collections, SVG) default to their native text format.

Exit codes: 0 on success, 1 for any domain error (bad input file,
violated precondition -- the library's message goes to stderr), 2 for
command-line usage errors.  Normal results go to stdout only.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

from . import accordion as _accordion
from . import cotags as _cotags
from . import fileio, render
from .circle import (
    Angle,
    Chord,
    PairClass,
    Polygon,
    classify_pair,
    in_arc,
    sigma_chord,
)
from .errors import LaminaError, PreconditionError
from .lamination import (
    check_sibling_invariance,
    disjoint_sibling_collections,
    gap_degree,
    gaps,
    pullback_generate,
    sibling_candidates,
    validate,
)
from .orbits import angle_orbit, leaf_orbit
from .portrait import (
    linkage_verdict,
    smart_critical_collection,
    validate_portrait,
)

__all__ = ["CommandResult", "cli_dispatch", "main"]

Payload = Union[str, dict, list]


class CommandResult:
    """Exit code plus captured stdout of one CLI invocation."""

    __slots__ = ("exit_code", "stdout")

    def __init__(self, exit_code: int, stdout: str):
        self.exit_code = exit_code
        self.stdout = stdout

    def __repr__(self):
        return f"CommandResult(exit_code={self.exit_code}, stdout={self.stdout!r})"


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _chord_list(chords) -> List[str]:
    return [str(c) for c in sorted(chords)]


# --- subcommand implementations -------------------------------------------


def _cmd_orbit(ns) -> Payload:
    info = angle_orbit(ns.degree, fileio.parse_angle(ns.angle))
    return {
        "preperiod": info.preperiod,
        "period": info.period,
        "orbit": [str(a) for a in info.orbit],
    }


def _cmd_leaf_orbit(ns) -> Payload:
    info = leaf_orbit(ns.degree, fileio.parse_chord(ns.chord))
    return {
        "preperiod": info.preperiod,
        "period": info.period,
        "leaves": [str(c) for c in info.leaves],
        "collapses_at": info.collapses_at,
        "first_linked_pair": list(info.first_linked_pair)
        if info.first_linked_pair is not None
        else None,
    }


def _cmd_pullback(ns) -> Payload:
    fcc = fileio.parse_critical_collection(_read(ns.critical))
    seed = fileio.parse_lamination(_read(ns.seed))
    lam = pullback_generate(fcc, seed, ns.depth)
    if ns.json:
        return {
            "degree": lam.degree,
            "depth": lam.depth_truncation,
            "leaves": _chord_list(lam.leaves),
            "discarded": len(lam.discards),
        }
    return fileio.serialize_lamination(lam)


def _cmd_validate(ns) -> Payload:
    lam = fileio.parse_lamination(_read(ns.file))
    rep = validate(lam)
    sib = check_sibling_invariance(lam)
    return {
        "ok": rep.ok and sib.passed,
        "crossing": [str(c) for c in rep.first_crossing] if rep.first_crossing else None,
        "closure_failures": _chord_list(rep.closure_failures),
        "pullback_failures": _chord_list(sib.pullback_failures),
        "sibling_failures": _chord_list(sib.sibling_failures),
        "sibling_waived": _chord_list(sib.waived),
    }


def _cmd_gaps(ns) -> Payload:
    lam = fileio.parse_lamination(_read(ns.file))
    out = []
    for g in gaps(lam):
        out.append(
            {
                "vertices": [str(v) for v in g.vertices],
                "degree": gap_degree(lam.degree, g) if g.vertices else None,
                "full_disk": g.is_full_disk,
                "truncation_artifact": g.is_outer_truncation_artifact,
            }
        )
    return out


def _cmd_accordion(ns) -> Payload:
    lam = fileio.parse_lamination(_read(ns.file))
    acc = _accordion.accordion_vs_lamination(lam, fileio.parse_chord(ns.axis))
    return {"axis": str(acc.axis), "members": _chord_list(acc.members)}


def _cmd_classify(ns) -> Payload:
    case = _accordion.classify_accordion(
        ns.degree, fileio.parse_chord(ns.axis), fileio.parse_chord(ns.moving)
    )
    witness = {}
    for field in (
        "flip_power",
        "flip_subcase",
        "common_period",
        "crossing_power",
        "crossing_image",
        "interleave_pattern",
    ):
        value = getattr(case, field)
        if value is not None:
            witness[field] = str(value) if isinstance(value, Chord) else value
    return {"case": case.case_id, "witness": witness}


def _in_closed_strip(c: Chord, n: Chord, n_prime: Chord) -> bool:
    """Whether chord ``c`` lies in the closed strip between two disjoint chords."""
    owner = {n.a: 0, n.b: 0, n_prime.a: 1, n_prime.b: 1}
    pts = sorted(owner)
    arcs = [
        (pts[i], pts[(i + 1) % 4])
        for i in range(4)
        if owner[pts[i]] != owner[pts[(i + 1) % 4]]
    ]

    def inside(x: Angle) -> bool:
        return any(x == p or x == q or in_arc(p, q, x) for p, q in arcs)

    return inside(c.a) and inside(c.b)


def _cmd_strip_check(ns) -> Payload:
    m = Chord(Angle(Fraction(342, 728)), Angle(Fraction(579, 728)))
    info_a = angle_orbit(3, m.a)
    info_b = angle_orbit(3, m.b)
    sigma_m = sigma_chord(3, m)
    m_prime = None
    for collection in disjoint_sibling_collections(3, m):
        for c in collection:
            if c != m and classify_pair(m, c) == PairClass.DISJOINT:
                m_prime = c
                break
        if m_prime is not None:
            break
    n = m
    for _ in range(4):
        n = sigma_chord(3, n)
    n_prime = None
    for cand in sibling_candidates(3, n, include_self=False):
        if classify_pair(n, cand) == PairClass.DISJOINT and _in_closed_strip(
            sigma_m, n, cand
        ):
            n_prime = cand
            break
    return {
        "M": str(m),
        "endpoint_preperiods": [info_a.preperiod, info_b.preperiod],
        "endpoint_periods": [info_a.period, info_b.period],
        "sigma_M": str(sigma_m),
        "M_prime": str(m_prime) if m_prime is not None else None,
        "N": str(n),
        "N_prime": str(n_prime) if n_prime is not None else None,
        "sigma_M_in_strip": n_prime is not None,
    }


def _cmd_qc_validate(ns) -> Payload:
    p = fileio.parse_portrait(_read(ns.file))
    lam = fileio.parse_lamination(_read(ns.lamination)) if ns.lamination else None
    rep = validate_portrait(p, lamination=lam)
    return {
        "valid": rep.valid,
        "problems": list(rep.problems),
        "warnings": list(rep.warnings),
    }


def _cmd_qc_link(ns) -> Payload:
    p1 = fileio.parse_portrait(_read(ns.first))
    p2 = fileio.parse_portrait(_read(ns.second))
    verdict = linkage_verdict(p1, p2)
    return {"relation": verdict.relation, "per_index": list(verdict.per_index)}


def _cmd_qc_smart(ns) -> Payload:
    p1 = fileio.parse_portrait(_read(ns.first))
    p2 = fileio.parse_portrait(_read(ns.second))
    leaf = fileio.parse_chord(ns.leaf)
    avoid = fileio.parse_angle(ns.avoid) if ns.avoid else None
    fcc = smart_critical_collection(leaf, p1, p2, avoid=avoid)
    if ns.json:
        return {"degree": fcc.degree, "chords": _chord_list(fcc.chords)}
    return fileio.serialize_critical_collection(fcc)


def _require_critical_shape(s, which: str):
    if not isinstance(s, (Chord, Polygon)):
        raise PreconditionError(
            f"{which} critical set must be a chord or polygon, got a point"
        )
    return s


def _cmd_cotag_compute(ns) -> Payload:
    c1, c2 = fileio.parse_tag_input(_read(ns.file))
    tag = _cotags.cotag(
        _require_critical_shape(c1, "first"), _require_critical_shape(c2, "second")
    )
    if ns.json:
        return {
            "first": fileio.serialize_convex(tag.first),
            "second": fileio.serialize_convex(tag.second),
        }
    return fileio.serialize_tag(tag)


def _parse_tag_file(path: str) -> _cotags.CoTag:
    first, second = fileio.parse_tag_input(_read(path))
    return _cotags.CoTag(first=first, second=second)


def _cmd_cotag_relation(ns) -> Payload:
    t1 = _parse_tag_file(ns.first)
    t2 = _parse_tag_file(ns.second)
    return {"relation": _cotags.tags_relation(t1, t2)}


def _cmd_cotag_usc(ns) -> Payload:
    limit = _parse_tag_file(ns.limit)
    target = _parse_tag_file(ns.target)
    seq = [_parse_tag_file(p) for p in ns.sequence]
    tolerance = Fraction(ns.tolerance) if ns.tolerance else Fraction(1, 64)
    rep = _cotags.usc_witness_check(seq, limit, target, tolerance=tolerance)
    return {
        "ok": rep.ok,
        "intersects": rep.intersects,
        "included": rep.included,
        "trace": [str(t) for t in rep.trace],
        "violation": rep.violation,
    }


def _cmd_render(ns) -> Payload:
    lam = fileio.parse_lamination(_read(ns.file))
    style = render.RenderStyle(
        geodesic_mode=ns.mode,
        stroke_width=ns.stroke,
        label_angles=ns.labels,
        image_size=ns.size,
    )
    return render.render_svg(lam, style)


# --- parser ----------------------------------------------------------------


def _add_out(sp):
    sp.add_argument("--out", metavar="FILE", help="write the result to FILE instead of stdout")


def _add_json(sp):
    sp.add_argument("--json", action="store_true", help="emit JSON instead of the text format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamina",
        description="Exact invariant laminations of the circle under angle d-tupling.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sp = sub.add_parser("orbit", help="forward orbit of an angle under multiplication by d")
    sp.add_argument("--degree", type=int, required=True, metavar="D")
    sp.add_argument("angle", help="angle literal p/q")
    _add_out(sp)
    sp.set_defaults(func=_cmd_orbit)

    sp = sub.add_parser("leaf-orbit", help="forward orbit of a chord")
    sp.add_argument("--degree", type=int, required=True, metavar="D")
    sp.add_argument("chord", help="chord literal 'p/q r/s' (one argument)")
    _add_out(sp)
    sp.set_defaults(func=_cmd_leaf_orbit)

    sp = sub.add_parser("pullback", help="generate a lamination by iterated preimages")
    sp.add_argument("critical", help="critical-collection file")
    sp.add_argument("seed", help="seed lamination file")
    sp.add_argument("--depth", type=int, required=True, metavar="N")
    _add_json(sp)
    _add_out(sp)
    sp.set_defaults(func=_cmd_pullback)

    sp = sub.add_parser("validate", help="check invariance conditions of a lamination file")
    sp.add_argument("file")
    _add_out(sp)
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("gaps", help="list complementary gaps with mapping degrees")
    sp.add_argument("file")
    _add_out(sp)
    sp.set_defaults(func=_cmd_gaps)

    sp = sub.add_parser("accordion", help="leaves of a lamination crossing an axis chord")
    sp.add_argument("file", help="lamination file")
    sp.add_argument("axis", help="chord literal 'p/q r/s' (one argument)")
    _add_out(sp)
    sp.set_defaults(func=_cmd_accordion)

    sp = sub.add_parser(
        "classify", help="four-case analysis of a linked chord pair's joint orbit"
    )
    sp.add_argument("--degree", type=int, required=True, metavar="D")
    sp.add_argument("axis", help="chord literal 'p/q r/s' (one argument)")
    sp.add_argument("moving", help="chord literal 'p/q r/s' (one argument)")
    _add_out(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser(
        "strip-check",
        help="reproduce the reference period-6 strip configuration for degree 3",
    )
    _add_out(sp)
    sp.set_defaults(func=_cmd_strip_check)

    sp = sub.add_parser("qc-validate", help="check a critical portrait file")
    sp.add_argument("file", help="portrait file")
    sp.add_argument("--lamination", metavar="FILE", help="lamination supplying leaf context")
    _add_out(sp)
    sp.set_defaults(func=_cmd_qc_validate)

    sp = sub.add_parser("qc-link", help="index-wise linkage relation of two portraits")
    sp.add_argument("first", help="portrait file")
    sp.add_argument("second", help="portrait file")
    _add_out(sp)
    sp.set_defaults(func=_cmd_qc_link)

    sp = sub.add_parser(
        "qc-smart",
        help="choose a critical collection whose chords avoid a given leaf",
    )
    sp.add_argument("first", help="portrait file owning the leaf")
    sp.add_argument("second", help="portrait file to select from")
    sp.add_argument("leaf", help="chord literal 'p/q r/s' (one argument)")
    sp.add_argument("--avoid", metavar="P/Q", help="endpoint of the leaf to keep clear of")
    _add_json(sp)
    _add_out(sp)
    sp.set_defaults(func=_cmd_qc_smart)

    sp = sub.add_parser("cotag", help="co-critical tags of cubic critical data")
    csub = sp.add_subparsers(dest="subcommand", metavar="ACTION")
    csub.required = True

    cs = csub.add_parser("compute", help="tag of two critical sets")
    cs.add_argument("file", help="two-line file: the critical sets as vertex lists")
    _add_json(cs)
    _add_out(cs)
    cs.set_defaults(func=_cmd_cotag_compute)

    cs = csub.add_parser("relation", help="equal / disjoint / overlap between two tags")
    cs.add_argument("first", help="two-line tag file (the factors as vertex lists)")
    cs.add_argument("second", help="two-line tag file")
    _add_out(cs)
    cs.set_defaults(func=_cmd_cotag_relation)

    cs = csub.add_parser("usc", help="finite-scale upper-semicontinuity witness")
    cs.add_argument("limit", help="tag file: declared limit")
    cs.add_argument("target", help="tag file: tag the limit is tested against")
    cs.add_argument("sequence", nargs="+", help="tag files forming the sequence")
    cs.add_argument("--tolerance", metavar="P/Q", help="final-distance bound (default 1/64)")
    _add_out(cs)
    cs.set_defaults(func=_cmd_cotag_usc)

    sp = sub.add_parser("render", help="draw a lamination file as SVG")
    sp.add_argument("file", help="lamination file")
    sp.add_argument(
        "--mode", choices=("straight", "hyperbolic"), default="straight",
        help="leaf geometry (default straight)",
    )
    sp.add_argument("--size", type=int, default=512, metavar="PX", help="image side length")
    sp.add_argument("--stroke", type=float, default=1.5, metavar="W", help="stroke width")
    sp.add_argument("--labels", action="store_true", help="label leaf endpoints")
    _add_out(sp)
    sp.set_defaults(func=_cmd_render)

    return parser


def cli_dispatch(argv: Sequence[str]) -> CommandResult:
    """Run one command line; stdout is captured, diagnostics go to stderr."""
    parser = build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else (0 if e.code is None else 2)
        return CommandResult(code, "")
    try:
        payload = ns.func(ns)
    except (LaminaError, OSError, ValueError, ZeroDivisionError) as e:
        print(e, file=sys.stderr)
        return CommandResult(1, "")
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    out_path: Optional[str] = getattr(ns, "out", None)
    if out_path:
        try:
            Path(out_path).write_text(text, encoding="utf-8")
        except OSError as e:
            print(e, file=sys.stderr)
            return CommandResult(1, "")
        return CommandResult(0, "")
    return CommandResult(0, text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = cli_dispatch(sys.argv[1:] if argv is None else argv)
    if result.stdout:
        sys.stdout.write(result.stdout)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
