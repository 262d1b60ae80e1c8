"""Built-in example registry.

Each entry constructs its fan and bundle, runs the full pipeline, and
returns one JSON-compatible document: an ordered list of sections plus
the aggregated citation identifiers and the final verdict sentence.
"""

from collections import Counter

from .arrangement import (
    from_bundle,
    kapranov_arrangement,
    losev_manin_subspaces,
    position_report,
    very_general_points,
)
from .cones import effective_generators, nonpolyhedrality_report, phi_star_map
from .coxring import (
    MdsVerdict,
    bundle_mds_report,
    class_group_projectivization,
    cox_presentation,
    tangent_cox_ring,
)
from .fan import (
    TOTARO_SUBDIVISION_VECTORS,
    extend_with_apexes,
    is_complete,
    is_projective,
    is_smooth,
    is_smooth_star_point,
    p1p1_iterated_blowup_fan,
    product_p1_fan,
    projective_space_fan,
    stellar_subdivide,
    totaro_fan_sequence,
    totaro_threefold_fan,
    validate_fan,
)
from .klyachko import check_compatibility, cotangent_bundle, standard_bundle
from .linalg import QQ, Field, Matrix, Subspace


class ExampleError(ValueError):
    """Unknown registry name or out-of-range example parameter."""


EXAMPLES = {
    "example-1.5": "rank-3 bundle on the 11-ray surface: nine very general plane points",
    "example-4.2": "cotangent bundle on the ten-times subdivided threefold",
    "theorem-1.4": "cotangent tower over the threefold, dimension 4 to 6 (--dim)",
    "kapranov": "frame arrangement whose blowup is a moduli space (--rank)",
    "losev-manin": "barycentric fan with coordinate-subspace filtrations (--dim)",
    "p2-cotangent": "cotangent bundle of the projective plane",
    "tangent": "tangent bundle presentation for a fan file (positional path)",
}


# ----------------------------------------------------------------------
# sections


def fan_section(fan, check_projective=True) -> dict:
    smooth, _ = is_smooth(fan)
    complete = is_complete(fan)
    # the exact projectivity program grows quickly with the cone count, so
    # high-dimensional entries skip it and report null
    projective = None
    if check_projective:
        projective = bool(is_projective(fan)[0]) if complete else False
    return {
        "kind": "fan",
        "dim": fan.dim,
        "ray_count": fan.n_rays,
        "max_cone_count": len(fan.max_cones),
        "valid": validate_fan(fan).ok,
        "smooth": smooth,
        "complete": complete,
        "projective": projective,
    }


def compatibility_section(bundle) -> dict:
    result = check_compatibility(bundle)
    out = {
        "kind": "compatibility",
        "compatible": result.compatible,
        "certified_cones": len(result.certificates),
    }
    if result.failure is not None:
        out["failure"] = {
            "cone": [i + 1 for i in result.failure.cone.rays],
            "reason": result.failure.reason,
        }
    return out


def positions_section(bundle) -> dict:
    b = bundle if bundle.is_normalized() else bundle.normalized()
    arr = from_bundle(b)
    rep = position_report(arr)
    repeated = [
        [i + 1 for i in m.provenance] for m in arr.members if len(m.provenance) > 1
    ]
    return {
        "kind": "positions",
        "member_count": rep.member_count,
        "s_member_count": rep.s_member_count,
        "hyperplane_count": rep.hyperplane_count,
        "pairwise_distinct": rep.pairwise_distinct,
        "point_only": rep.point_only,
        "linearly_general": rep.linearly_general,
        "collinear": rep.collinear,
        "on_rational_normal_curve": rep.on_rational_normal_curve,
        "repeated_groups": repeated,
    }


def class_group_section(bundle) -> dict:
    doc = class_group_projectivization(bundle).to_dict()
    doc["kind"] = "class_group"
    return doc


def presentation_section(pres) -> dict:
    doc = pres.to_dict()
    doc["presentation_kind"] = doc["kind"]
    doc["kind"] = "presentation"
    return doc


def mds_section(report) -> dict:
    doc = report.to_dict()
    doc["kind"] = "mds"
    return doc


def effective_cone_section(bundle) -> dict:
    b = bundle if bundle.is_normalized() else bundle.normalized()
    phi = phi_star_map(b)
    supplied = [phi.blowup.line()] + [
        phi.blowup.exceptional(k) for k in range(1, len(phi.blowup.names))
    ]
    gens = effective_generators(b, supplied)
    return {
        "kind": "effective_cone",
        "generator_count": len(gens),
        "generators": [
            {
                "class": g.divisor_class.render(),
                "coords": list(g.divisor_class.coords),
                "provenance": g.provenance,
            }
            for g in gens
        ],
    }


def nonpolyhedrality_section(bundle, budget) -> dict:
    doc = nonpolyhedrality_report(bundle, depth=budget).to_dict()
    doc["kind"] = "nonpolyhedrality"
    return doc


def annotation_section(text) -> dict:
    return {"kind": "annotation", "text": text}


def arrangement_section(arr) -> dict:
    by_codim = Counter(m.codim for m in arr.members)
    return {
        "kind": "arrangement",
        "member_count": len(arr.members),
        "members_by_codim": {str(k): by_codim[k] for k in sorted(by_codim)},
    }


def _collect_citations(sections) -> list:
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


def _document(name, sections, verdict_sentence, **params) -> dict:
    doc = {"example": name}
    doc.update(params)
    doc["sections"] = sections
    doc["citations"] = _collect_citations(sections)
    if verdict_sentence is not None:
        doc["verdict"] = verdict_sentence
    return doc


# ----------------------------------------------------------------------
# registry entries


def _plane(field, normal):
    rows = Matrix(field, [list(normal)]).kernel_basis()
    return Subspace(field, len(normal), tuple(rows))


def _nine_point_bundle(seed):
    points, conditions = very_general_points(3, 9, seed=seed)
    fan = p1p1_iterated_blowup_fan()
    subspaces = [_plane(QQ, p) for p in points] + [None, None]
    return standard_bundle(fan, 3, subspaces), conditions


def _tower_fan(dim):
    fan = totaro_threefold_fan()
    for _ in range(dim - 3):
        fan = extend_with_apexes(fan)
    return fan


def _kapranov_bundle(rank, char):
    arr = kapranov_arrangement(rank, char)
    members = arr.members
    fan = _surface_fan_with_rays(len(members) + 2)
    subspaces = [m.subspace for m in members] + [None] * (fan.n_rays - len(members))
    return standard_bundle(fan, rank, subspaces, field=Field(char)), arr


def _losev_manin_bundle(dim, char):
    fan, subspaces = losev_manin_subspaces(dim, char)
    return standard_bundle(fan, dim, list(subspaces), field=Field(char))


def example_objects(name, char=0, seed=5, dim=None, rank=None) -> tuple:
    """The fan or bundle each registry entry runs on, for serialization tests."""
    if name == "example-1.5":
        return (_nine_point_bundle(seed)[0],)
    if name == "example-4.2":
        return (cotangent_bundle(totaro_threefold_fan(), char),)
    if name == "theorem-1.4":
        return (cotangent_bundle(_tower_fan(dim if dim is not None else 4), char),)
    if name == "kapranov":
        return (_kapranov_bundle(rank if rank is not None else 3, char)[0],)
    if name == "losev-manin":
        return (_losev_manin_bundle(dim if dim is not None else 2, char),)
    if name == "p2-cotangent":
        return (cotangent_bundle(projective_space_fan(2), char),)
    if name == "tangent":
        return ()
    raise ExampleError(
        "unknown example %r; available: %s" % (name, ", ".join(sorted(EXAMPLES)))
    )


def _run_nine_points(char, seed, budget):
    if char != 0:
        raise ExampleError("example-1.5 is defined over the rationals; omit --char")
    bundle, conditions = _nine_point_bundle(seed)
    report = bundle_mds_report(bundle, very_general=True)
    sections = [
        fan_section(bundle.fan),
        compatibility_section(bundle),
        annotation_section(
            "the seed-%d points are certified for %d genericity conditions and stand "
            "in for a very general choice; the verdict is conditional on very-generality"
            % (seed, len(conditions))
        ),
        class_group_section(bundle),
        presentation_section(cox_presentation(bundle)),
        positions_section(bundle),
        mds_section(report),
        effective_cone_section(bundle),
        nonpolyhedrality_section(bundle, budget),
    ]
    return _document(
        "example-1.5",
        sections,
        report.verdict.sentence(),
        characteristic=0,
        seed=seed,
        budget=budget,
    )


def _run_totaro(char):
    fans, _ = totaro_fan_sequence()
    star_checks = [
        is_smooth_star_point(f, v) for f, v in zip(fans[:-1], TOTARO_SUBDIVISION_VECTORS)
    ]
    subdivision = {
        "kind": "subdivisions",
        "count": len(TOTARO_SUBDIVISION_VECTORS),
        "all_smooth_star_points": all(star_checks),
        "all_fans_smooth": all(is_smooth(f)[0] for f in fans),
    }
    fan = totaro_threefold_fan()
    bundle = cotangent_bundle(fan, char)
    report = bundle_mds_report(bundle)
    sections = [
        subdivision,
        fan_section(fan),
        compatibility_section(bundle),
        positions_section(bundle),
        presentation_section(cox_presentation(bundle.normalized())),
        mds_section(report),
    ]
    return _document(
        "example-4.2", sections, report.verdict.sentence(), characteristic=char
    )


def _run_tower(dim, char):
    if dim is None or not 4 <= dim <= 6:
        raise ExampleError("theorem-1.4 needs --dim between 4 and 6")
    fan = totaro_threefold_fan()
    steps = []
    for _ in range(dim - 3):
        fan = extend_with_apexes(fan)
        steps.append(
            {
                "dim": fan.dim,
                "ray_count": fan.n_rays,
                "valid": validate_fan(fan).ok,
                "smooth": is_smooth(fan)[0],
                "complete": is_complete(fan),
            }
        )
    bundle = cotangent_bundle(fan, char)
    report = bundle_mds_report(bundle)
    sections = [
        {"kind": "extension_steps", "steps": steps},
        fan_section(fan, check_projective=False),
        compatibility_section(bundle),
        positions_section(bundle),
        mds_section(report),
    ]
    return _document(
        "theorem-1.4", sections, report.verdict.sentence(), characteristic=char, dim=dim
    )


def _surface_fan_with_rays(n):
    fan = product_p1_fan(2)
    while fan.n_rays < n:
        cone = fan.max_cones[0]
        gens = fan.generators(cone)
        v = tuple(a + b for a, b in zip(gens[0], gens[1]))
        if not is_smooth_star_point(fan, v):
            raise RuntimeError("sum of a smooth 2-cone's generators must be a star point")
        fan = stellar_subdivide(fan, v)
    return fan


def _run_kapranov(rank, char):
    if rank is None or not 3 <= rank <= 6:
        raise ExampleError("kapranov needs --rank between 3 and 6")
    bundle, arr = _kapranov_bundle(rank, char)
    fan = bundle.fan
    verdict = MdsVerdict(
        "Unknown",
        False,
        ("polynomial-over-blowup", "kapranov-moduli", "moduli-finite-generation-open"),
        (
            "the centers form the frame arrangement: the blowup is isomorphic to "
            "the Deligne-Mumford moduli space Mbar_{0,%d}" % (rank + 2),
            "the verdict is equivalent to finite generation of R(Mbar_{0,%d})" % (rank + 2),
            "it is not known whether this ring is finitely generated",
        ),
    )
    sections = [
        arrangement_section(arr),
        fan_section(fan),
        compatibility_section(bundle),
        presentation_section(cox_presentation(bundle)),
        {"kind": "moduli", "space": "Mbar_{0,%d}" % (rank + 2), "verdict": verdict.to_dict()},
    ]
    return _document(
        "kapranov", sections, verdict.sentence(), characteristic=char, rank=rank
    )


def _run_losev_manin(dim, char):
    if dim is None or not 2 <= dim <= 4:
        raise ExampleError("losev-manin needs --dim between 2 and 4")
    bundle = _losev_manin_bundle(dim, char)
    report = bundle_mds_report(bundle)
    sections = [
        fan_section(bundle.fan, check_projective=dim <= 3),
        compatibility_section(bundle),
        presentation_section(cox_presentation(bundle)),
        mds_section(report),
    ]
    return _document(
        "losev-manin", sections, report.verdict.sentence(), characteristic=char, dim=dim
    )


def _run_p2_cotangent(char):
    fan = projective_space_fan(2)
    bundle = cotangent_bundle(fan, char)
    report = bundle_mds_report(bundle)
    sections = [
        fan_section(fan),
        compatibility_section(bundle),
        presentation_section(cox_presentation(bundle.normalized())),
        annotation_section(
            "the Cox ring is isomorphic to the coordinate ring of the Grassmannian "
            "Grass(2, 4) in its Plucker embedding (textual identification only; no "
            "Grassmannian arithmetic is performed)"
        ),
        mds_section(report),
    ]
    return _document(
        "p2-cotangent", sections, report.verdict.sentence(), characteristic=char
    )


def _run_tangent(fan, char):
    if fan is None:
        raise ExampleError("tangent needs a fan file path")
    pres = tangent_cox_ring(fan, char)
    sections = [fan_section(fan), presentation_section(pres)]
    return _document("tangent", sections, None, characteristic=char)


def run_example(name, char=0, seed=5, budget=5, dim=None, rank=None, fan=None) -> dict:
    """Build and run one registry entry, returning its document."""
    if name == "example-1.5":
        return _run_nine_points(char, seed, budget)
    if name == "example-4.2":
        return _run_totaro(char)
    if name == "theorem-1.4":
        return _run_tower(dim, char)
    if name == "kapranov":
        return _run_kapranov(rank, char)
    if name == "losev-manin":
        return _run_losev_manin(dim, char)
    if name == "p2-cotangent":
        return _run_p2_cotangent(char)
    if name == "tangent":
        return _run_tangent(fan, char)
    raise ExampleError(
        "unknown example %r; available: %s" % (name, ", ".join(sorted(EXAMPLES)))
    )
