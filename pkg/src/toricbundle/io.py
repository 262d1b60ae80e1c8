"""Reading and writing fans and bundles as structured JSON text.

A fan document carries `dim`, `rays`, and `max_cones`; a bundle document
adds `rank`, `char`, and `filtrations`.  Integers may be written as
decimal strings (exact beyond 64 bits), subspace basis entries as "p/q"
rational strings, and the whole `filtrations` field may be the shorthand
"cotangent" or "tangent".  Parsing is exact; every diagnostic names the
offending field.
"""

import json
from fractions import Fraction

from .fan import Cone, Fan, validate_fan
from .klyachko import (
    ToricVectorBundle,
    cotangent_bundle,
    standard_bundle,
    tangent_bundle,
)
from .linalg import Field, Subspace


class ParseError(ValueError):
    """Malformed or semantically invalid input, with field provenance."""


def _fail(where, problem):
    raise ParseError("%s: %s" % (where, problem))


def _expect_list(value, where):
    if not isinstance(value, list):
        _fail(where, "expected a list, got %s" % type(value).__name__)
    return value


def _parse_int(value, where):
    if isinstance(value, bool):
        _fail(where, "expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            _fail(where, "expected a decimal integer string, got %r" % (value,))
    _fail(where, "expected an integer, got %s" % type(value).__name__)


def _parse_rational(value, where):
    if isinstance(value, bool):
        _fail(where, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            _fail(where, "expected an integer or \"p/q\" string, got %r" % (value,))
    _fail(where, "expected a rational, got %s" % type(value).__name__)


def parse_fan_document(doc, where="input") -> Fan:
    if not isinstance(doc, dict):
        _fail(where, "expected an object, got %s" % type(doc).__name__)
    for key in ("dim", "rays", "max_cones"):
        if key not in doc:
            _fail(where, "missing field %r" % key)
    dim = _parse_int(doc["dim"], where + ".dim")
    if dim < 1:
        _fail(where + ".dim", "dimension must be positive")
    rays = []
    for i, entry in enumerate(_expect_list(doc["rays"], where + ".rays")):
        spot = "%s.rays[%d]" % (where, i)
        row = _expect_list(entry, spot)
        if len(row) != dim:
            _fail(spot, "expected %d coordinates, got %d" % (dim, len(row)))
        rays.append(tuple(_parse_int(c, "%s[%d]" % (spot, j)) for j, c in enumerate(row)))
    cones = []
    for i, entry in enumerate(_expect_list(doc["max_cones"], where + ".max_cones")):
        spot = "%s.max_cones[%d]" % (where, i)
        idx = [_parse_int(c, "%s[%d]" % (spot, j)) for j, c in enumerate(_expect_list(entry, spot))]
        for j in idx:
            if not 0 <= j < len(rays):
                _fail(spot, "ray index %d out of range" % j)
        if len(set(idx)) != len(idx):
            _fail(spot, "repeated ray index")
        cones.append(Cone(tuple(sorted(idx))))
    try:
        fan = Fan(dim, tuple(rays), tuple(cones))
    except ValueError as err:
        _fail(where, str(err))
    report = validate_fan(fan)
    if not report.ok:
        _fail(where, "; ".join(report.violations))
    return fan


def _parse_subspace(entry, field, rank, where):
    if entry is None:
        return None
    if not isinstance(entry, dict):
        _fail(where, "expected null or an object with a basis, got %s" % type(entry).__name__)
    if "basis" not in entry:
        _fail(where, "missing field 'basis'")
    rows = []
    for i, raw in enumerate(_expect_list(entry["basis"], where + ".basis")):
        spot = "%s.basis[%d]" % (where, i)
        row = _expect_list(raw, spot)
        if len(row) != rank:
            _fail(spot, "basis vector has %d entries, bundle rank is %d" % (len(row), rank))
        parsed = [_parse_rational(c, "%s[%d]" % (spot, j)) for j, c in enumerate(row)]
        try:
            rows.append(tuple(field.of(c) for c in parsed))
        except ValueError as err:
            _fail(spot, str(err))
    if not rows:
        return None
    subspace = Subspace.span(field, rank, [list(r) for r in rows])
    if subspace.dim != len(rows):
        _fail(where + ".basis", "basis vectors are linearly dependent")
    if subspace.dim >= rank:
        _fail(where + ".basis", "subspace must be proper (dimension < rank)")
    return subspace


def parse_bundle_document(doc, where="input") -> ToricVectorBundle:
    fan = parse_fan_document(doc, where)
    for key in ("rank", "char", "filtrations"):
        if key not in doc:
            _fail(where, "missing field %r" % key)
    rank = _parse_int(doc["rank"], where + ".rank")
    char = _parse_int(doc["char"], where + ".char")
    try:
        field = Field(char)
    except ValueError as err:
        _fail(where + ".char", str(err))
    filt = doc["filtrations"]
    if isinstance(filt, str):
        if filt == "cotangent":
            if rank != fan.dim:
                _fail(where + ".rank", "the cotangent bundle has rank %d on this fan" % fan.dim)
            return cotangent_bundle(fan, char)
        if filt == "tangent":
            if rank != fan.dim:
                _fail(where + ".rank", "the tangent bundle has rank %d on this fan" % fan.dim)
            return tangent_bundle(fan, char)
        _fail(where + ".filtrations", "unknown shorthand %r (use \"cotangent\" or \"tangent\")" % (filt,))
    entries = _expect_list(filt, where + ".filtrations")
    if len(entries) != fan.n_rays:
        _fail(
            where + ".filtrations",
            "expected one entry per ray (%d), got %d" % (fan.n_rays, len(entries)),
        )
    subspaces, steps, shifts = [], [], []
    for i, entry in enumerate(entries):
        spot = "%s.filtrations[%d]" % (where, i)
        subspaces.append(_parse_subspace(entry, field, rank, spot))
        if isinstance(entry, dict):
            step = _parse_int(entry.get("step", 1), spot + ".step")
            if step < 1:
                _fail(spot + ".step", "step must be positive")
            steps.append(step)
            shifts.append(_parse_int(entry.get("shift", 0), spot + ".shift"))
        else:
            steps.append(1)
            shifts.append(0)
    try:
        return standard_bundle(fan, rank, subspaces, steps=steps, field=field, shifts=shifts)
    except ValueError as err:
        _fail(where, str(err))


def parse_document(doc, where="input"):
    """Bundle when `rank` is present, fan otherwise."""
    if not isinstance(doc, dict):
        _fail(where, "expected an object, got %s" % type(doc).__name__)
    if "rank" in doc:
        return parse_bundle_document(doc, where)
    return parse_fan_document(doc, where)


def parse_input(path):
    """Load a fan or bundle file; diagnostics carry line/field provenance."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise ParseError("%s: %s" % (path, err.strerror or err)) from err
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            "%s: malformed JSON at line %d column %d: %s" % (path, err.lineno, err.colno, err.msg)
        ) from err
    return parse_document(doc, where=path)


# ----------------------------------------------------------------------
# serialization


def _emit_int(v):
    return v if -(2**63) < v < 2**63 else str(v)


def _emit_scalar(c):
    if isinstance(c, Fraction):
        return str(c)
    return str(c.val)


def fan_to_document(fan: Fan) -> dict:
    return {
        "dim": fan.dim,
        "rays": [[_emit_int(c) for c in ray] for ray in fan.rays],
        "max_cones": [list(cone.rays) for cone in fan.max_cones],
    }


def bundle_to_document(bundle: ToricVectorBundle) -> dict:
    doc = fan_to_document(bundle.fan)
    doc["rank"] = bundle.rank
    doc["char"] = bundle.field.char
    entries = []
    for f in bundle.filtrations:
        if f.subspace.is_zero() and f.step == 1 and f.shift == 0:
            entries.append(None)
            continue
        entry = {"basis": [[_emit_scalar(c) for c in row] for row in f.subspace.basis]}
        if f.step != 1:
            entry["step"] = f.step
        if f.shift != 0:
            entry["shift"] = f.shift
        entries.append(entry)
    doc["filtrations"] = entries
    return doc


def document_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
