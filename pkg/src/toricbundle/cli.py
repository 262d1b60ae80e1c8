"""Command-line front end.

One job per invocation: parse the input (file, registry name, or synthetic
point configuration), run the pipeline, and emit a single self-describing
document as indented JSON or as a plain-text summary of the same tree.
Output is byte-deterministic given (input, seed, budget, format).
"""

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arrangement import PositionReport
from .citations import CITATIONS
from .cones import homogeneous_form, orbit_closure_class
from .coxring import cox_presentation, mds_classify, bundle_mds_report
from .examples import (
    EXAMPLES,
    ExampleError,
    compatibility_section,
    effective_cone_section,
    fan_section,
    mds_section,
    nonpolyhedrality_section,
    positions_section,
    presentation_section,
    run_example,
)
from .fan import Fan
from .io import ParseError, document_text, parse_input
from .klyachko import ToricVectorBundle, _monomials
from .linalg import Field


class UsageError(ValueError):
    """Out-of-range flag or a missing/ambiguous input source."""


@dataclass(frozen=True)
class JobSpec:
    """One validated invocation: what to run and how to report it."""

    subcommand: str
    source: str
    characteristic: int
    seed: int
    budget: int
    fmt: str

    def __post_init__(self):
        if not self.source:
            raise UsageError("exactly one input source is required")
        try:
            Field(self.characteristic)
        except ValueError as exc:
            raise UsageError(str(exc))
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must fit in 64 bits, got %d" % self.seed)
        if not 1 <= self.budget <= 16:
            raise UsageError("budget must be between 1 and 16, got %d" % self.budget)
        if self.fmt not in ("text", "json"):
            raise UsageError("format must be text or json, got %r" % self.fmt)


# ----------------------------------------------------------------------
# polynomial forms on the command line

_FORM_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|z(\d+)|(\^)|(\*)|(\+)|(-)|(\S))")


def _tokenize_form(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _FORM_TOKEN.match(text, pos)
        if m is None:
            break  # only trailing whitespace fails to match; \S catches junk
        pos = m.end()
        number, var, caret, star, plus, minus, junk = m.groups()
        if junk is not None:
            raise ParseError("form: unexpected character %r" % junk)
        if number is not None:
            tokens.append(("num", Fraction(number)))
        elif var is not None:
            tokens.append(("var", int(var)))
        elif caret is not None:
            tokens.append(("caret", None))
        elif star is not None:
            tokens.append(("star", None))
        else:
            tokens.append(("sign", 1 if plus is not None else -1))
    return tokens


def parse_form(text, field, rank):
    """A homogeneous polynomial in z1..zr, e.g. "z1^3 + 2/3 z1 z2^2 - z3^3"."""
    tokens = _tokenize_form(text)
    if not tokens:
        raise ParseError("form: no terms found")
    terms = {}
    i, n = 0, len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "sign":
            sign *= tokens[i][1]
            i += 1
        if i >= n:
            raise ParseError("form: trailing sign with no term")
        coeff = field.of(sign)
        exps = [0] * rank
        saw_factor = False
        expect_factor = False
        while i < n:
            kind, value = tokens[i]
            if kind == "sign" and not expect_factor:
                break
            if kind == "num":
                coeff = coeff * field.of(value)
                saw_factor, expect_factor = True, False
                i += 1
            elif kind == "var":
                if not 1 <= value <= rank:
                    raise ParseError(
                        "form: variable z%d is out of range; the bundle has rank %d"
                        % (value, rank)
                    )
                e = 1
                if i + 1 < n and tokens[i + 1][0] == "caret":
                    if (
                        i + 2 >= n
                        or tokens[i + 2][0] != "num"
                        or tokens[i + 2][1].denominator != 1
                    ):
                        raise ParseError("form: '^' must be followed by an integer")
                    e = int(tokens[i + 2][1])
                    i += 2
                exps[value - 1] += e
                saw_factor, expect_factor = True, False
                i += 1
            elif kind == "star":
                if not saw_factor:
                    raise ParseError("form: '*' needs a factor on each side")
                expect_factor = True
                i += 1
            elif kind == "caret":
                raise ParseError("form: '^' must follow a variable")
            else:
                raise ParseError("form: '*' needs a factor on each side")
        if expect_factor:
            raise ParseError("form: '*' needs a factor on each side")
        if not saw_factor:
            raise ParseError("form: empty term")
        key = tuple(exps)
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    terms = {k: c for k, c in terms.items() if c != field.zero}
    if not terms:
        raise ParseError("form: all terms cancel; the zero form has no orbit class")
    degrees = {sum(k) for k in terms}
    if len(degrees) > 1:
        raise ParseError(
            "form: not homogeneous; found terms of degrees %s"
            % ", ".join(str(d) for d in sorted(degrees))
        )
    degree = degrees.pop()
    coeffs = [terms.get(e, field.zero) for e in _monomials(rank, degree)]
    return homogeneous_form(field, rank, degree, coeffs)


def render_form(form):
    """Canonical text for a parsed form, for echoing into reports."""
    parts = []
    for c, e in zip(form.coeffs, form.monomials()):
        if not c:
            continue
        factors = []
        for k, exp in enumerate(e):
            if exp == 1:
                factors.append("z%d" % (k + 1))
            elif exp > 1:
                factors.append("z%d^%d" % (k + 1, exp))
        cs = str(c)
        if not factors:
            parts.append(cs)
        elif cs == "1":
            parts.append("*".join(factors))
        elif cs == "-1":
            parts.append("-" + "*".join(factors))
        else:
            parts.append(cs + "*" + "*".join(factors))
    out = ""
    for text in parts:
        if not out:
            out = text
        elif text.startswith("-"):
            out += " - " + text[1:]
        else:
            out += " + " + text
    return out


# ----------------------------------------------------------------------
# text rendering


def _yn(value):
    if value is None:
        return "skipped"
    return "yes" if value else "no"


def _render_fan(s, lines):
    lines.append(
        "fan: dim %d, %d rays, %d maximal cones"
        % (s["dim"], s["ray_count"], s["max_cone_count"])
    )
    lines.append(
        "  valid: %s  smooth: %s  complete: %s  projective: %s"
        % (_yn(s["valid"]), _yn(s["smooth"]), _yn(s["complete"]), _yn(s["projective"]))
    )


def _render_compatibility(s, lines):
    if s["compatible"]:
        lines.append("compatibility: yes (%d cones certified)" % s["certified_cones"])
    else:
        lines.append("compatibility: no")
        fail = s.get("failure")
        if fail:
            lines.append("  failure on cone %s: %s" % (fail["cone"], fail["reason"]))


def _render_annotation(s, lines):
    lines.append("note: %s" % s["text"])


def _render_class_group(s, lines):
    lines.append("class group: rank %d" % s["rank"])
    lines.append("  basis: %s" % ", ".join(s["basis"]))
    lines.append("  eliminated cone rays: %s" % (s["sigma0_rays"],))
    lines.append("  blowup relabeling available: %s" % _yn(s["phi_star_available"]))


def _render_presentation(s, lines):
    lines.append("presentation (%s):" % s["presentation_kind"])
    lines.append("  base: %s" % s["base"]["description"])
    lines.append("  class group rank: %d" % s["class_group"]["rank"])
    lines.append("  free variables: %d" % s["free_variables"])
    for g in s["generators"]:
        lines.append(
            "  generator %s  degree %s  (%s)" % (g["name"], g["degree_text"], g["role"])
        )
    if not s["relations"]:
        lines.append("  no relations")
    for rel in s["relations"]:
        suffix = "  [%s]" % rel["tag"] if rel["tag"] else ""
        lines.append("  relation %s  degree %s%s" % (rel["text"], rel["degree_text"], suffix))
    for note in s["annotations"]:
        lines.append("  note: %s" % note)


def _render_positions(s, lines):
    lines.append(
        "arrangement: %d members, %d blowup centers, %d hyperplane members"
        % (s["member_count"], s["s_member_count"], s["hyperplane_count"])
    )
    if s.get("position") is not None:
        lines.append("  position: %s (asserted)" % s["position"])
    lines.append("  pairwise distinct: %s" % _yn(s["pairwise_distinct"]))
    lines.append("  point centers only: %s" % _yn(s["point_only"]))
    lines.append("  linearly general: %s" % _yn(s["linearly_general"]))
    lines.append("  collinear: %s" % _yn(s["collinear"]))
    lines.append("  on rational normal curve: %s" % _yn(s["on_rational_normal_curve"]))
    for group in s.get("repeated_groups", ()):
        lines.append("  repeated subspace on rays %s" % (group,))


def _render_mds(s, lines):
    verdict = s["verdict"]
    lines.append("mori dream space verdict: %s" % verdict["sentence"])
    for reason in verdict["reasons"]:
        lines.append("  because %s" % reason)
    if s.get("base"):
        lines.append("  base: %s" % s["base"])
    if s.get("pencil_subset"):
        lines.append("  cubic pencil through points %s" % (s["pencil_subset"],))
    for k, step in enumerate(s.get("descent_steps", ())):
        lines.append(
            "  descent step %d: functional (%s), %d points, ambient rank %d"
            % (
                k + 1,
                ", ".join(step["functional"]),
                len(step["points"]),
                step["ambient_rank"],
            )
        )
    for note in s.get("transfer_notes", ()):
        lines.append("  note: %s" % note)


def _render_effective_cone(s, lines):
    lines.append("effective cone generators: %d" % s["generator_count"])
    for g in s["generators"]:
        lines.append("  %s  (%s)" % (g["class"], g["provenance"]))


def _render_nonpolyhedrality(s, lines):
    lines.append("effective cone polyhedrality evidence:")
    if s["ray_hypothesis_holds"]:
        lines.append("  ray hypothesis: holds")
    else:
        lines.append(
            "  ray hypothesis: fails (rays %s)" % (s["rays_outside_sigma_pair"],)
        )
    lines.append(
        "  threshold %s: %s" % (s["threshold"], "holds" if s["threshold_holds"] else "fails")
    )
    lines.append("  hypotheses met: %s" % _yn(s["hypotheses_met"]))
    lines.append("  enumeration regime supported: %s" % _yn(s["regime_supported"]))
    if s["class_count"]:
        lines.append("  (-1)-classes found: %d" % s["class_count"])
        lines.append(
            "  level max degrees: %s"
            % ", ".join(str(d) for d in s["level_max_degrees"])
        )
        lines.append("  strictly increasing: %s" % _yn(s["degrees_strictly_increase"]))
        for sample in s["sample_classes"]:
            lines.append("  sample class %s" % sample)
    for note in s["notes"]:
        lines.append("  note: %s" % note)


def _render_subdivisions(s, lines):
    lines.append(
        "stellar subdivisions: %d steps, smooth star points: %s, smoothness preserved: %s"
        % (s["count"], _yn(s["all_smooth_star_points"]), _yn(s["all_fans_smooth"]))
    )


def _render_extension_steps(s, lines):
    for step in s["steps"]:
        lines.append(
            "extension to dim %d: %d rays, valid: %s, smooth: %s, complete: %s"
            % (
                step["dim"],
                step["ray_count"],
                _yn(step["valid"]),
                _yn(step["smooth"]),
                _yn(step["complete"]),
            )
        )


def _render_arrangement(s, lines):
    lines.append("frame arrangement: %d members" % s["member_count"])
    for codim, count in s["members_by_codim"].items():
        lines.append("  codim %s: %d members" % (codim, count))


def _render_moduli(s, lines):
    lines.append("blowup model: %s" % s["space"])
    for reason in s["verdict"]["reasons"]:
        lines.append("  %s" % reason)


def _render_orbit_class(s, lines):
    lines.append("form: %s" % s["form"])
    lines.append("  degree: %d" % s["degree"])
    lines.append("orbit closure class: %s" % s["class"])


_RENDERERS = {
    "fan": _render_fan,
    "compatibility": _render_compatibility,
    "annotation": _render_annotation,
    "class_group": _render_class_group,
    "presentation": _render_presentation,
    "positions": _render_positions,
    "mds": _render_mds,
    "effective_cone": _render_effective_cone,
    "nonpolyhedrality": _render_nonpolyhedrality,
    "subdivisions": _render_subdivisions,
    "extension_steps": _render_extension_steps,
    "arrangement": _render_arrangement,
    "moduli": _render_moduli,
    "orbit_class": _render_orbit_class,
}


def render_text(doc) -> str:
    """Plain-text summary of a report document; the verdict is the last line."""
    lines = []
    if "example" in doc:
        header = "example %s" % doc["example"]
    elif "input" in doc:
        header = "%s %s" % (doc["command"], doc["input"])
    else:
        header = doc["command"]
    lines.append("report: %s" % header)
    for key in ("characteristic", "seed", "budget", "dim", "rank", "points", "position"):
        if key in doc:
            lines.append("%s: %s" % (key, doc[key]))
    for section in doc["sections"]:
        lines.append("")
        renderer = _RENDERERS.get(section.get("kind"))
        if renderer is None:
            lines.append(document_text(section).rstrip())
        else:
            renderer(section, lines)
    if doc.get("citations"):
        lines.append("")
        lines.append("citations:")
        for cid in doc["citations"]:
            lines.append("  [%s] %s" % (cid, CITATIONS[cid]["statement"]))
    if "verdict" in doc:
        lines.append("")
        lines.append("verdict: %s" % doc["verdict"])
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# subcommands


def _collect_citations(sections):
    seen = []
    for section in sections:
        pools = []
        if "citations" in section:
            pools.append(section["citations"])
        if isinstance(section.get("verdict"), dict):
            pools.append(section["verdict"].get("citations", []))
        for pool in pools:
            for cid in pool:
                if cid not in seen:
                    seen.append(cid)
    return seen


def _load(path, char):
    obj = parse_input(path)
    if isinstance(obj, ToricVectorBundle) and char != 0 and obj.field.char != char:
        raise ParseError(
            "%s: characteristic mismatch: --char %d but the file declares %d"
            % (path, char, obj.field.char)
        )
    return obj


def _need_bundle(obj, command):
    if isinstance(obj, Fan):
        raise ParseError(
            "%s needs a bundle file (rank and filtrations); got a bare fan" % command
        )
    return obj if obj.is_normalized() else obj.normalized()


def _file_document(command, path, sections, verdict=None, **extras):
    doc = {"command": command, "input": os.path.basename(path)}
    doc.update(extras)
    doc["sections"] = sections
    doc["citations"] = _collect_citations(sections)
    if verdict is not None:
        doc["verdict"] = verdict
    return doc


def _cmd_validate(spec):
    obj = _load(spec.source, spec.characteristic)
    if isinstance(obj, Fan):
        sections = [fan_section(obj)]
        char = spec.characteristic
    else:
        sections = [fan_section(obj.fan), compatibility_section(obj)]
        char = obj.field.char
    doc = _file_document("validate", spec.source, sections, characteristic=char)
    failed = any(s.get("compatible") is False or s.get("valid") is False for s in sections)
    return doc, (1 if failed else 0)


def _cmd_cox(spec):
    bundle = _need_bundle(_load(spec.source, spec.characteristic), "cox")
    sections = [
        fan_section(bundle.fan),
        compatibility_section(bundle),
        presentation_section(cox_presentation(bundle)),
    ]
    doc = _file_document("cox", spec.source, sections, characteristic=bundle.field.char)
    return doc, 0


def _synthetic_position_report(s, position):
    flags = {
        "general": (True, False, False),
        "very-general": (True, False, False),
        "collinear": (False, True, False),
        "on-rnc": (True, False, True),
    }[position]
    return PositionReport(
        member_count=s,
        s_member_count=s,
        hyperplane_count=0,
        pairwise_distinct=True,
        point_only=True,
        linearly_general=flags[0],
        collinear=flags[1],
        on_rational_normal_curve=flags[2],
    )


def _cmd_mds(spec, args):
    if args.file is not None:
        bundle = _need_bundle(_load(spec.source, spec.characteristic), "mds")
        report = bundle_mds_report(bundle, very_general=args.very_general)
        sections = [positions_section(bundle), mds_section(report)]
        doc = _file_document(
            "mds",
            spec.source,
            sections,
            verdict=report.verdict.sentence(),
            characteristic=bundle.field.char,
        )
        return doc, 0
    report = _synthetic_position_report(args.points, args.position)
    verdict = mds_classify(
        args.rank, args.points, report, very_general=args.position == "very-general"
    )
    sections = [
        {
            "kind": "positions",
            "member_count": report.member_count,
            "s_member_count": report.s_member_count,
            "hyperplane_count": 0,
            "position": args.position,
            "pairwise_distinct": report.pairwise_distinct,
            "point_only": report.point_only,
            "linearly_general": report.linearly_general,
            "collinear": report.collinear,
            "on_rational_normal_curve": report.on_rational_normal_curve,
        },
        {"kind": "mds", "verdict": verdict.to_dict()},
    ]
    doc = {
        "command": "mds",
        "characteristic": spec.characteristic,
        "rank": args.rank,
        "points": args.points,
        "position": args.position,
        "sections": sections,
        "citations": _collect_citations(sections),
        "verdict": verdict.sentence(),
    }
    return doc, 0


def _cmd_effcone(spec):
    bundle = _need_bundle(_load(spec.source, spec.characteristic), "effcone")
    sections = []
    try:
        sections.append(effective_cone_section(bundle))
    except ValueError:
        pass  # no zero cone: the report below says why the relabeling is missing
    sections.append(nonpolyhedrality_section(bundle, spec.budget))
    doc = _file_document(
        "effcone",
        spec.source,
        sections,
        characteristic=bundle.field.char,
        seed=spec.seed,
        budget=spec.budget,
    )
    return doc, 0


def _cmd_class(spec, args):
    bundle = _need_bundle(_load(spec.source, spec.characteristic), "class")
    form = parse_form(args.form, bundle.field, bundle.rank)
    divisor = orbit_closure_class(form, bundle)
    sections = [
        {
            "kind": "orbit_class",
            "form": render_form(form),
            "degree": form.degree,
            "class": divisor.render(),
            "coords": [str(c) for c in divisor.coords],
        }
    ]
    doc = _file_document(
        "class", spec.source, sections, characteristic=bundle.field.char
    )
    return doc, 0


def _cmd_example(spec, args):
    fan = None
    if args.name == "tangent":
        if args.path is None:
            raise ExampleError("tangent needs a fan file path")
        obj = parse_input(args.path)
        if isinstance(obj, ToricVectorBundle):
            raise ParseError("tangent needs a bare fan file, got a bundle")
        fan = obj
    elif args.path is not None:
        raise UsageError("example %s takes no file argument" % args.name)
    doc = run_example(
        args.name,
        char=spec.characteristic,
        seed=spec.seed,
        budget=spec.budget,
        dim=args.dim,
        rank=args.rank,
        fan=fan,
    )
    return doc, 0


# ----------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--char", type=int, default=0, metavar="P",
                        help="coefficient characteristic: 0 or a prime")
    common.add_argument("--seed", type=int, default=5, metavar="N")
    common.add_argument("--budget", type=int, default=5, metavar="N",
                        help="search depth for enumerations (1..16)")

    parser = argparse.ArgumentParser(
        prog="toricbundle",
        description="Exact pipelines from toric fans and filtrations to "
        "Cox presentations, Mori-dream-space verdicts, and effective cones.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="validate a fan or bundle file")
    p.add_argument("file")

    p = sub.add_parser("cox", parents=[common],
                       help="Cox-ring presentation for a bundle file")
    p.add_argument("file")

    p = sub.add_parser("mds", parents=[common],
                       help="Mori-dream-space verdict for a bundle file or a "
                       "synthetic point configuration")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--position", default=None,
                   choices=("general", "very-general", "collinear", "on-rnc"))
    p.add_argument("--very-general", action="store_true",
                   help="treat a file's centers as very general")

    p = sub.add_parser("effcone", parents=[common],
                       help="effective-cone generators and polyhedrality evidence")
    p.add_argument("file")

    p = sub.add_parser("class", parents=[common],
                       help="orbit closure class of a hypersurface")
    p.add_argument("file")
    p.add_argument("--form", required=True,
                   help="homogeneous polynomial in z1..zr, e.g. \"z1^2 - z2*z3\"")

    p = sub.add_parser("example", parents=[common],
                       help="run a registry entry: " + ", ".join(sorted(EXAMPLES)))
    p.add_argument("name")
    p.add_argument("path", nargs="?", default=None,
                   help="fan file (tangent entry only)")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--rank", type=int, default=None)

    return parser


def _make_spec(args) -> JobSpec:
    if args.subcommand == "example":
        source = args.name
    elif args.subcommand == "mds":
        synthetic = args.rank is not None or args.points is not None or args.position is not None
        if args.file is not None and synthetic:
            raise UsageError("exactly one input source: give a file or --rank/--points/--position")
        if args.file is None and not (args.rank is not None and args.points is not None and args.position is not None):
            raise UsageError("mds needs a file, or all of --rank, --points, --position")
        source = args.file if args.file is not None else (
            "rank=%d,points=%d,position=%s" % (args.rank, args.points, args.position))
    else:
        source = args.file
    return JobSpec(
        subcommand=args.subcommand,
        source=source,
        characteristic=args.char,
        seed=args.seed,
        budget=args.budget,
        fmt=args.format,
    )


def run_job(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _make_spec(args)
    except UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return 2
    try:
        if spec.subcommand == "validate":
            doc, code = _cmd_validate(spec)
        elif spec.subcommand == "cox":
            doc, code = _cmd_cox(spec)
        elif spec.subcommand == "mds":
            doc, code = _cmd_mds(spec, args)
        elif spec.subcommand == "effcone":
            doc, code = _cmd_effcone(spec)
        elif spec.subcommand == "class":
            doc, code = _cmd_class(spec, args)
        else:
            doc, code = _cmd_example(spec, args)
    except UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return 2
    except (ParseError, ExampleError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    if spec.fmt == "json":
        sys.stdout.write(document_text(doc))
    else:
        sys.stdout.write(render_text(doc))
    return code


def main() -> None:
    sys.exit(run_job(sys.argv[1:]))


if __name__ == "__main__":
    main()
