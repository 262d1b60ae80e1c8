"""Exact-arithmetic toolkit for projectivized toric vector bundles.

Fans and their predicates, Klyachko filtrations, subspace arrangements,
Cox-ring presentations over blowup bases, Mori-dream-space verdicts with
citation trails, and effective-cone bookkeeping, all over the rationals
or a prime field.  The `toricbundle` console script fronts the same
pipelines.
"""

from .arrangement import (
    Arrangement,
    PositionReport,
    ProjectiveSubspace,
    cubic_pencil_check,
    from_bundle,
    kapranov_arrangement,
    losev_manin_subspaces,
    position_report,
    very_general_points,
)
from .citations import CITATIONS, citation_statement
from .cones import (
    CurveClass,
    HomogeneousForm,
    cremona_move,
    effective_generators,
    form_product,
    homogeneous_form,
    linear_form,
    minus_one_classes,
    multiplicity_at,
    nonpolyhedrality_report,
    orbit_closure_class,
    phi_star,
    phi_star_map,
)
from .coxring import (
    ClassGroup,
    CoxPresentation,
    DivisorClass,
    MdsVerdict,
    bundle_mds_report,
    class_group_projectivization,
    cox_presentation,
    mds_classify,
    tangent_cox_ring,
)
from .examples import EXAMPLES, ExampleError, example_objects, run_example
from .fan import (
    TOTARO_SUBDIVISION_VECTORS,
    Cone,
    Fan,
    barycentric_subdivision,
    cone_coefficients,
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
from .io import (
    ParseError,
    bundle_to_document,
    document_text,
    fan_to_document,
    parse_document,
    parse_input,
)
from .klyachko import (
    RayFiltration,
    ToricVectorBundle,
    check_compatibility,
    cotangent_bundle,
    single_ray_projectivization_fan,
    standard_bundle,
    sym_power_dimension,
    tangent_bundle,
    verify_certificate,
)
from .linalg import QQ, Field, Matrix, Subspace

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "CITATIONS",
    "ClassGroup",
    "Cone",
    "CoxPresentation",
    "CurveClass",
    "DivisorClass",
    "EXAMPLES",
    "ExampleError",
    "Fan",
    "Field",
    "HomogeneousForm",
    "Matrix",
    "MdsVerdict",
    "ParseError",
    "PositionReport",
    "ProjectiveSubspace",
    "QQ",
    "RayFiltration",
    "Subspace",
    "TOTARO_SUBDIVISION_VECTORS",
    "ToricVectorBundle",
    "barycentric_subdivision",
    "bundle_mds_report",
    "bundle_to_document",
    "check_compatibility",
    "citation_statement",
    "class_group_projectivization",
    "cone_coefficients",
    "cotangent_bundle",
    "cox_presentation",
    "cremona_move",
    "cubic_pencil_check",
    "document_text",
    "effective_generators",
    "example_objects",
    "extend_with_apexes",
    "fan_to_document",
    "form_product",
    "from_bundle",
    "homogeneous_form",
    "is_complete",
    "is_projective",
    "is_smooth",
    "is_smooth_star_point",
    "kapranov_arrangement",
    "linear_form",
    "losev_manin_subspaces",
    "mds_classify",
    "minus_one_classes",
    "multiplicity_at",
    "nonpolyhedrality_report",
    "orbit_closure_class",
    "p1p1_iterated_blowup_fan",
    "parse_document",
    "parse_input",
    "phi_star",
    "phi_star_map",
    "position_report",
    "product_p1_fan",
    "projective_space_fan",
    "run_example",
    "single_ray_projectivization_fan",
    "standard_bundle",
    "stellar_subdivide",
    "sym_power_dimension",
    "tangent_bundle",
    "tangent_cox_ring",
    "totaro_fan_sequence",
    "totaro_threefold_fan",
    "validate_fan",
    "verify_certificate",
    "very_general_points",
]
