import itertools
import json
import random
from fractions import Fraction

import pytest

from toricbundle.linalg import QQ, Field, Matrix, Subspace
from toricbundle.fan import (
    Cone,
    Fan,
    extend_with_apexes,
    p1p1_iterated_blowup_fan,
    product_p1_fan,
    projective_space_fan,
    totaro_threefold_fan,
)
from toricbundle.klyachko import cotangent_bundle, standard_bundle
from toricbundle.arrangement import (
    PositionReport,
    from_bundle,
    losev_manin_subspaces,
    very_general_points,
)
from toricbundle.coxring import (
    DivisorClass,
    bundle_mds_report,
    class_group_projectivization,
    cox_presentation,
    hyperplane_reduction,
    mds_classify,
    point_blowup,
    tangent_cox_ring,
)


def plane(field, normal):
    rows = Matrix(field, [list(normal)]).kernel_basis()
    return Subspace(field, len(normal), tuple(rows))


def example_surface_bundle(seed=5):
    """Rank-3 bundle on the 11-ray surface fan: nine very general plane
    points as filtration planes, zero spaces on the two negative rays."""
    fan = p1p1_iterated_blowup_fan()
    pts, _ = very_general_points(3, 9, seed=seed)
    subs = [plane(QQ, p) for p in pts] + [None, None]
    return standard_bundle(fan, 3, subs)


def point_position(r, s, collinear=False, rnc=False, general=True):
    """Synthetic position report for s points in P^(r-1)."""
    return PositionReport(
        member_count=s,
        s_member_count=s,
        hyperplane_count=0,
        pairwise_distinct=True,
        point_only=True,
        linearly_general=general and not collinear,
        collinear=collinear,
        on_rational_normal_curve=rnc,
        rnc_witness=None,
        hyperplane_functional=None,
    )


# ----------------------------------------------------------------------
# divisor classes


def test_divisor_class_arithmetic():
    basis = ("O(1)", "D_1", "D_2")
    a = DivisorClass(basis, (3, -1, 0))
    b = DivisorClass(basis, (0, 1, 2))
    assert (a + b).coords == (3, 0, 2)
    assert (a - b).coords == (3, -2, -2)
    assert (-a).coords == (-3, 1, 0)
    assert a.scaled(2).coords == (6, -2, 0)
    assert not a.is_zero()
    assert DivisorClass(basis, (0, 0, 0)).is_zero()


def test_divisor_class_render():
    basis = ("O(1)", "D_1", "D_2")
    assert DivisorClass(basis, (3, -1, 0)).render() == "3 O(1) - D_1"
    assert DivisorClass(basis, (0, 0, 0)).render() == "0"
    assert DivisorClass(basis, (-1, 0, 2)).render() == "-O(1) + 2 D_2"
    assert DivisorClass(basis, (0, 1, 0)).render() == "D_1"


def test_divisor_class_errors():
    with pytest.raises(ValueError):
        DivisorClass(("O(1)",), (1, 2))
    a = DivisorClass(("O(1)", "D_1"), (1, 0))
    b = DivisorClass(("O(1)", "D_2"), (1, 0))
    with pytest.raises(ValueError):
        a + b


# ----------------------------------------------------------------------
# class groups


def test_class_group_p2():
    fan = projective_space_fan(2)
    bundle = standard_bundle(fan, 2, [None, None, None])
    group = class_group_projectivization(bundle)
    assert group.rank == 2
    assert group.sigma0 == (0, 1)
    assert group.names == ("O(1)", "D_3")
    # all three ray divisors are linearly equivalent on P^2
    d3 = group.unit("D_3")
    assert group.ray_divisor(0) == d3
    assert group.ray_divisor(1) == d3
    assert group.ray_divisor(2) == d3


def test_class_group_character_relations():
    """Oracle: for every lattice character e_k the principal divisor
    sum_i <e_k, v_i> D_i must vanish in the class group."""
    fans = [
        projective_space_fan(2),
        projective_space_fan(3),
        product_p1_fan(2),
        product_p1_fan(3),
        p1p1_iterated_blowup_fan(),
        totaro_threefold_fan(),
    ]
    for fan in fans:
        bundle = standard_bundle(fan, 2, [None] * fan.n_rays)
        group = class_group_projectivization(bundle)
        assert group.rank == 1 + fan.n_rays - fan.dim
        for k in range(fan.dim):
            total = group.zero()
            for i in range(fan.n_rays):
                total = total + group.ray_divisor(i).scaled(fan.rays[i][k])
            assert total.is_zero(), (fan.rays, k)


def test_class_group_example_surface():
    group = class_group_projectivization(example_surface_bundle())
    assert group.rank == 10
    assert group.sigma0 == (9, 10)
    assert group.phi_star_available
    assert group.names == ("O(1)",) + tuple("D_%d" % i for i in range(1, 10))
    assert group.ray_divisor(9).coords == (0, 1, 0, 1, 1, 2, 1, 2, 3, 3)
    assert group.ray_divisor(10).coords == (0, 0, 1, 1, 2, 1, 3, 3, 2, 1)
    assert group.ray_divisor(9).render() == (
        "D_1 + D_3 + D_4 + 2 D_5 + D_6 + 2 D_7 + 3 D_8 + 3 D_9"
    )
    assert group.from_o1_and_rays(3, [0] * 11).coords == (3,) + (0,) * 9


def test_class_group_sigma0_fallback():
    # no all-zero maximal cone: lex-first cone is used, relabeling flagged off
    fan = projective_space_fan(2)
    subs = [plane(QQ, (1, 2, 3)), plane(QQ, (1, 1, 1)), plane(QQ, (3, 1, 2))]
    group = class_group_projectivization(standard_bundle(fan, 3, subs))
    assert group.sigma0 == (0, 1)
    assert not group.phi_star_available


def test_class_group_input_errors():
    half = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)),))
    with pytest.raises(ValueError, match="complete"):
        class_group_projectivization(standard_bundle(half, 2, [None, None]))
    singular = Fan(2, ((1, 0), (1, 2), (-1, -1)), (Cone((0, 1)), Cone((1, 2)), Cone((0, 2))))
    with pytest.raises(ValueError, match="smooth"):
        class_group_projectivization(standard_bundle(singular, 2, [None] * 3))
    bad = Fan(2, ((2, 0), (0, 1), (-1, -1)), (Cone((0, 1)), Cone((1, 2)), Cone((0, 2))))
    with pytest.raises(ValueError, match="invalid fan"):
        class_group_projectivization(standard_bundle(bad, 2, [None] * 3))
    lines = [
        Subspace.span(QQ, 2, [[1, 0]]),
        Subspace.span(QQ, 2, [[0, 1]]),
        Subspace.span(QQ, 2, [[1, 1]]),
        None,
    ]
    incompatible = standard_bundle(projective_space_fan(3), 2, lines)
    with pytest.raises(ValueError, match="not compatible"):
        class_group_projectivization(incompatible)


# ----------------------------------------------------------------------
# Cox presentations


def test_presentation_example_surface():
    pres = cox_presentation(example_surface_bundle())
    assert pres.free_variables == 2
    assert [g.name for g in pres.generators] == ["x_10", "x_11"]
    assert all(g.role == "free" for g in pres.generators)
    assert pres.generators[0].degree.coords == (0, 1, 0, 1, 1, 2, 1, 2, 3, 3)
    assert pres.relations == ()
    assert pres.base.describe() == "R(Bl_9 P^2)"
    assert pres.base.s_count == 9
    assert pres.base.doubled_rays == ()
    assert pres.base.repeated == ()
    lines = pres.text_lines()
    assert "base: R(Bl_9 P^2)" in lines
    assert "no relations" in lines


def test_presentation_requires_normalized():
    bundle = cotangent_bundle(projective_space_fan(2))
    with pytest.raises(ValueError, match="normalized"):
        cox_presentation(bundle)
    cox_presentation(bundle.normalized())


def test_presentation_long_step():
    fan = projective_space_fan(2)
    bundle = standard_bundle(fan, 3, [plane(QQ, (1, 2, 3)), None, None], steps=[3, 1, 1])
    pres = cox_presentation(bundle)
    assert pres.free_variables == 2
    assert pres.base.describe() == "R(Bl_1 P^2)"
    assert [r.text for r in pres.relations] == ["1_{E_1} - x_1^3"]
    assert pres.relations[0].tag == "long step"
    assert pres.relations[0].degree.render() == "3 D_1"
    roles = {g.name: g.role for g in pres.generators}
    assert roles == {"x_1": "bound", "x_2": "free", "x_3": "free"}


def test_presentation_doubled_hyperplane_long_step():
    fan = projective_space_fan(2)
    line = Subspace.span(QQ, 2, [[1, 1]])
    bundle = standard_bundle(fan, 2, [line, None, None], steps=[2, 1, 1])
    pres = cox_presentation(bundle)
    assert [r.text for r in pres.relations] == ["1_{H_1} - x_1^2 y_1^2"]
    assert pres.relations[0].tag == "doubled hyperplane, long step"
    assert pres.relations[0].degree.render() == "2 O(1)"
    degrees = {g.name: g.degree.render() for g in pres.generators}
    assert degrees["x_1"] == "D_1"
    assert degrees["y_1"] == "O(1) - D_1"
    assert any("combines a long step" in note for note in pres.annotations)


def test_presentation_repeated_subspace():
    fan = product_p1_fan(2)
    sub = plane(QQ, (1, 1, 1))
    bundle = standard_bundle(fan, 3, [sub, sub, None, None])
    pres = cox_presentation(bundle)
    assert [r.text for r in pres.relations] == ["1_{E_1} - x_1 x_2"]
    assert pres.relations[0].tag == "repeated subspace"
    assert pres.free_variables == 2
    assert pres.base.describe() == "R(Bl_1 P^2)"
    assert pres.base.repeated == ((0, 1),)
    assert any("same subspace" in note for note in pres.annotations)


def test_presentation_cotangent_p2():
    pres = cox_presentation(cotangent_bundle(projective_space_fan(2)).normalized())
    assert pres.free_variables == 0
    assert pres.base.describe() == "R(P^1)"
    assert [g.name for g in pres.generators] == ["x_1", "y_1", "x_2", "y_2", "x_3", "y_3"]
    assert all(g.role == "pair" for g in pres.generators)
    assert [r.text for r in pres.relations] == [
        "1_{H_1} - x_1 y_1",
        "1_{H_2} - x_2 y_2",
        "1_{H_3} - x_3 y_3",
    ]
    assert all(r.tag == "doubled hyperplane" for r in pres.relations)
    assert all(r.degree.render() == "O(1)" for r in pres.relations)


def test_presentation_relation_degrees_recomputable():
    """Oracle: every monomial term's degree, recomputed from the emitted
    generator degrees, must equal the stored relation degree."""
    bundles = [
        cotangent_bundle(projective_space_fan(2)).normalized(),
        standard_bundle(
            projective_space_fan(2), 3, [plane(QQ, (1, 2, 3)), None, None], steps=[3, 1, 1]
        ),
        standard_bundle(product_p1_fan(2), 3, [plane(QQ, (1, 1, 1)), plane(QQ, (1, 1, 1)), None, None]),
    ]
    fan, subs = losev_manin_subspaces(3)
    bundles.append(standard_bundle(fan, 3, list(subs)))
    for bundle in bundles:
        pres = cox_presentation(bundle)
        degree_of = {g.name: g.degree for g in pres.generators}
        for rel in pres.relations:
            for _, mono in rel.terms:
                if any(name not in degree_of for name, _ in mono):
                    continue  # the canonical-section symbol itself
                total = None
                for name, e in mono:
                    piece = degree_of[name].scaled(e)
                    total = piece if total is None else total + piece
                assert total == rel.degree, (rel.text, mono)


def test_presentation_random_bundles_stay_consistent():
    """Property: on random compatible bundles the presentation builds
    without a homogeneity failure and the free count matches the zero rays."""
    rng = random.Random(404)
    fan = p1p1_iterated_blowup_fan()
    for _ in range(10):
        subs = []
        zero_count = 0
        for i in range(fan.n_rays):
            kind = rng.random()
            if kind < 0.4:
                subs.append(None)
                zero_count += 1
            else:
                normal = tuple(rng.randint(-4, 4) for _ in range(3))
                if not any(normal):
                    normal = (1, 0, 0)
                subs.append(plane(QQ, normal))
        steps = [rng.randint(1, 3) for _ in range(fan.n_rays)]
        bundle = standard_bundle(fan, 3, subs, steps=steps)
        pres = cox_presentation(bundle)
        assert pres.free_variables == zero_count
        names = [g.name for g in pres.generators]
        assert len(names) == len(set(names))


def test_presentation_to_dict_deterministic():
    one = json.dumps(cox_presentation(example_surface_bundle()).to_dict(), sort_keys=True)
    two = json.dumps(cox_presentation(example_surface_bundle()).to_dict(), sort_keys=True)
    assert one == two


# ----------------------------------------------------------------------
# tangent-bundle presentations


def test_tangent_projective_spaces():
    for d in (2, 3, 4):
        pres = tangent_cox_ring(projective_space_fan(d))
        assert pres.class_group.rank == 2
        assert pres.free_variables == 0
        assert pres.base.describe() == "R(P^%d)" % (d - 1)
        assert len(pres.relations) == 1
        rel = pres.relations[0]
        assert rel.text == " + ".join("x_%d y_%d" % (i, i) for i in range(1, d + 2))
        assert rel.tag == "ray syzygy"
        assert rel.degree.render() == "O(1)"


def test_tangent_p2_degrees():
    pres = tangent_cox_ring(projective_space_fan(2))
    degrees = {g.name: g.degree.render() for g in pres.generators}
    assert degrees["x_1"] == "D_3"
    assert degrees["y_1"] == "O(1) - D_3"


def test_tangent_product_fan_opposite_rays():
    pres = tangent_cox_ring(product_p1_fan(2))
    assert [r.text for r in pres.relations] == ["x_1 y_1 + x_3 y_3", "x_2 y_2 + x_4 y_4"]
    warned = [a for a in pres.annotations if a.startswith("warning")]
    assert len(warned) == 2
    assert "rays 1 and 3 are opposite" in warned[0]
    assert "rays 2 and 4 are opposite" in warned[1]


def test_tangent_relation_count_and_kernel_oracle():
    """Oracle: the relation coefficients must be kernel vectors of the ray
    matrix, so sum_i lambda_i v_i = 0 holds coordinate by coordinate."""
    for fan in (projective_space_fan(3), product_p1_fan(2), totaro_threefold_fan()):
        pres = tangent_cox_ring(fan)
        assert len(pres.relations) == fan.n_rays - fan.dim
        for rel in pres.relations:
            assert rel.degree.render() == "O(1)"
            lam = [QQ.of(0)] * fan.n_rays
            for coeff, mono in rel.terms:
                xs = [name for name, _ in mono if name.startswith("x_")]
                assert len(xs) == 1
                lam[int(xs[0][2:]) - 1] = QQ.of(coeff)
            for k in range(fan.dim):
                assert sum(lam[i] * fan.rays[i][k] for i in range(fan.n_rays)) == 0


def test_tangent_requires_complete_fan():
    half = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)),))
    with pytest.raises(ValueError, match="complete"):
        tangent_cox_ring(half)


# ----------------------------------------------------------------------
# point blowups and hyperplane rewriting


def test_point_blowup_errors():
    with pytest.raises(ValueError, match="at least one"):
        point_blowup(QQ, [])
    with pytest.raises(ValueError, match="mixed"):
        point_blowup(QQ, [(1, 0), (1, 0, 0)])
    with pytest.raises(ValueError, match="distinct"):
        point_blowup(QQ, [(1, 0, 0), (2, 0, 0)])


def test_hyperplane_reduction_line_in_p3():
    base = point_blowup(QQ, [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)])
    red = hyperplane_reduction(base)
    assert len(red.steps) == 1
    assert red.free_variables == 1
    assert red.base.dim == 2
    assert len(red.base.points) == 3
    assert red.describe() == "polynomial ring in 1 variable over R(Bl_3 P^2)"


def test_hyperplane_reduction_tower_points():
    fan4 = extend_with_apexes(totaro_threefold_fan())
    members = from_bundle(cotangent_bundle(fan4).normalized()).s_members()
    points = [m.point_coordinates() for m in members]
    assert len(points) == 16
    # the two apexes leave the hyperplane of the original rays
    with pytest.raises(ValueError, match="no containing hyperplane"):
        hyperplane_reduction(point_blowup(QQ, points))
    old = [p for p in points if p[3] == 0]
    assert len(old) == 14
    red = hyperplane_reduction(point_blowup(QQ, old))
    assert len(red.steps) == 1
    assert red.steps[0].from_dim == 3
    assert red.base.dim == 2
    assert red.describe() == "polynomial ring in 1 variable over R(Bl_14 P^2)"


def test_hyperplane_reduction_dimension_guard():
    base = point_blowup(QQ, [(1, 0, 0), (0, 1, 0)])
    with pytest.raises(ValueError, match="exceed 2"):
        hyperplane_reduction(base)
    spanning = point_blowup(
        QQ, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)]
    )
    with pytest.raises(ValueError, match="no containing hyperplane"):
        hyperplane_reduction(spanning)


# ----------------------------------------------------------------------
# the classifier


def test_classifier_table():
    assert mds_classify(3, 8, point_position(3, 8)).verdict == "MDS"
    vg = mds_classify(3, 9, point_position(3, 9), very_general=True)
    assert vg.verdict == "NotMDS" and vg.conditional
    assert mds_classify(3, 9, point_position(3, 9, collinear=True)).verdict == "MDS"
    assert mds_classify(3, 9, point_position(3, 9, rnc=True)).verdict == "MDS"
    assert mds_classify(4, 7, point_position(4, 7)).verdict == "MDS"
    vg8 = mds_classify(4, 8, point_position(4, 8), very_general=True)
    assert vg8.verdict == "NotMDS" and vg8.conditional


def test_classifier_sentences():
    vg = mds_classify(3, 9, point_position(3, 9), very_general=True)
    assert vg.sentence() == "not a Mori dream space (conditional on very-generality)"
    assert mds_classify(3, 8, point_position(3, 8)).sentence() == "a Mori dream space"
    unknown = mds_classify(3, 9, point_position(3, 9, general=False))
    assert unknown.verdict == "Unknown"
    assert unknown.sentence() == "not determined by the implemented criteria"


def test_classifier_small_sets_use_rational_normal_curves():
    # r+2 points in linearly general position always sit on such a curve
    v = mds_classify(4, 6, point_position(4, 6))
    assert v.verdict == "MDS"
    assert v.citations == ("rational-normal-curve",)


def test_classifier_errors():
    with pytest.raises(ValueError):
        mds_classify(1, 5, point_position(1, 5))
    with pytest.raises(ValueError):
        mds_classify(3, 0, point_position(3, 0))


def test_classifier_matches_exact_threshold():
    """Oracle: with only the general-position flags set, the verdict is a
    pure function of the exact rational threshold."""
    half = Fraction(1, 2)
    for r in range(3, 7):
        for s in range(r + 1, r + 30):
            over = Fraction(1, r) + Fraction(1, s - r) > half
            plain = mds_classify(r, s, point_position(r, s))
            if s <= r + 2 or over:
                assert plain.verdict == "MDS", (r, s)
            else:
                assert plain.verdict == "Unknown", (r, s)
            certified = mds_classify(r, s, point_position(r, s), very_general=True)
            if s <= r + 2 or over:
                assert certified.verdict == "MDS", (r, s)
            else:
                assert certified.verdict == "NotMDS", (r, s)


def test_threshold_identity_window():
    half = Fraction(1, 2)
    for r in range(3, 65):
        bound = r + 2 + Fraction(4, r - 2)
        for s in range(r + 1, 201):
            assert (Fraction(1, r) + Fraction(1, s - r) <= half) == (s >= bound)


# ----------------------------------------------------------------------
# bundle-level reports


def test_report_example_surface():
    bundle = example_surface_bundle()
    rep = bundle_mds_report(bundle, very_general=True)
    assert rep.verdict.verdict == "NotMDS"
    assert rep.verdict.conditional
    assert rep.verdict.citations == ("polynomial-over-blowup", "very-general-threshold")
    assert rep.verdict.sentence() == "not a Mori dream space (conditional on very-generality)"
    assert rep.s_member_count == 9
    assert rep.zero_rays == (9, 10)
    assert rep.base_description == "R(Bl_9 P^2)"
    assert rep.pencil_subset is None
    assert rep.descent_steps == ()
    plain = bundle_mds_report(bundle)
    assert plain.verdict.verdict == "Unknown"


def test_report_no_centers_is_polynomial():
    bundle = standard_bundle(product_p1_fan(2), 3, [None] * 4)
    rep = bundle_mds_report(bundle)
    assert rep.verdict.verdict == "MDS"
    assert rep.verdict.citations == ("polynomial-over-blowup",)
    assert rep.s_member_count == 0
    assert rep.base_description == "R(P^2)"


def test_report_cotangent_p3_rational_normal_curve():
    rep = bundle_mds_report(cotangent_bundle(projective_space_fan(3)))
    assert rep.verdict.verdict == "MDS"
    assert rep.verdict.citations == ("polynomial-over-blowup", "rational-normal-curve")
    assert rep.verdict.reasons == ("the points lie on a rational normal curve",)


def test_report_totaro_cotangent_char_zero():
    rep = bundle_mds_report(cotangent_bundle(totaro_threefold_fan()))
    assert rep.verdict.verdict == "NotMDS"
    assert not rep.verdict.conditional
    assert rep.s_member_count == 14
    assert rep.pencil_subset == (0, 2, 5, 6, 7, 10, 11, 12, 13)
    assert rep.verdict.citations == (
        "polynomial-over-blowup",
        "cubic-pencil-intersection",
        "point-superset-transfer",
    )
    assert rep.verdict.reasons[0] == (
        "points (1, 3, 6, 7, 8, 11, 12, 13, 14) form the reduced complete intersection "
        "of a pencil of cubics, projectively equivalent to the 3x3 grid"
    )
    assert rep.verdict.reasons[1] == "the remaining points only add further blowup centers"


def test_report_totaro_cotangent_char_five_matches():
    rep = bundle_mds_report(cotangent_bundle(totaro_threefold_fan(), 5))
    assert rep.verdict.verdict == "NotMDS"
    assert rep.s_member_count == 14
    assert rep.pencil_subset == (0, 2, 5, 6, 7, 10, 11, 12, 13)


def test_report_totaro_cotangent_small_characteristic_coincidences():
    rep2 = bundle_mds_report(cotangent_bundle(totaro_threefold_fan(), 2))
    assert rep2.s_member_count == 7
    assert rep2.repeated == ((2, 7, 10, 12), (4, 9), (5, 13), (6, 8, 11))
    assert rep2.verdict.verdict == "Unknown"
    rep3 = bundle_mds_report(cotangent_bundle(totaro_threefold_fan(), 3))
    assert rep3.s_member_count == 11
    assert rep3.repeated == ((3, 12), (4, 10), (7, 8))
    assert rep3.verdict.verdict == "Unknown"
    assert any("product relation" in note for note in rep2.transfer_notes)


def test_report_tower_descends_through_hyperplane():
    fan4 = extend_with_apexes(totaro_threefold_fan())
    rep = bundle_mds_report(cotangent_bundle(fan4))
    assert rep.verdict.verdict == "NotMDS"
    assert len(rep.descent_steps) == 1
    step = rep.descent_steps[0]
    assert step["functional"] == ("0", "0", "0", "1")
    assert step["ambient_rank"] == 4
    assert len(step["points"]) == 14
    assert "hyperplane-polynomial-extension" in rep.verdict.citations
    assert "cubic-pencil-intersection" in rep.verdict.citations
    assert "lie in a common hyperplane" in rep.verdict.reasons[0]


def test_report_losev_manin_presentations():
    for d, expect_rays in ((2, 6), (3, 14)):
        fan, subs = losev_manin_subspaces(d)
        assert fan.n_rays == expect_rays
        pres = cox_presentation(standard_bundle(fan, d, list(subs)))
        assert pres.free_variables == d + 1
        assert len(pres.relations) == d * (d + 1) // 2
        for rel in pres.relations:
            assert rel.tag == "doubled hyperplane"
            sym = rel.terms[0][1][0][0]
            i = sym[len("1_{H_") : -1]
            assert rel.text == "1_{H_%s} - x_%s y_%s" % (i, i, i)


def test_report_losev_manin_d4_is_moduli_space():
    fan, subs = losev_manin_subspaces(4)
    rep = bundle_mds_report(standard_bundle(fan, 4, list(subs)))
    assert rep.verdict.verdict == "Unknown"
    assert "kapranov-moduli" in rep.verdict.citations
    assert "moduli-finite-generation-open" in rep.verdict.citations
    assert any(
        "isomorphic to the Deligne-Mumford moduli space Mbar_{0,6}" in r
        for r in rep.verdict.reasons
    )
    assert any("not known" in r for r in rep.verdict.reasons)


def test_report_grid_gate_rejects_other_pencils():
    """Nine inflection points of the Hesse configuration over F_7 span a
    transverse cubic pencil but have twelve 3-point lines, so they are not
    projectively equivalent to the grid and no strong verdict is drawn."""
    F7 = Field(7)
    points = []
    for k in (1, 2, 4):
        points += [(0, 1, -k), (1, 0, -k), (1, -k, 0)]
    fan = p1p1_iterated_blowup_fan()
    subs = [plane(F7, p) for p in points] + [None, None]
    rep = bundle_mds_report(standard_bundle(fan, 3, subs, field=F7))
    assert rep.s_member_count == 9
    assert rep.position.pairwise_distinct
    assert rep.verdict.verdict == "Unknown"
    assert rep.pencil_subset is None


def test_report_positive_dimensional_center_stays_open():
    sub = Subspace.span(QQ, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    bundle = standard_bundle(product_p1_fan(2), 4, [sub, None, None, None])
    rep = bundle_mds_report(bundle)
    assert rep.verdict.verdict == "Unknown"
    assert rep.verdict.reasons == (
        "no implemented criterion covers blowup centers of positive dimension",
    )


def test_report_to_dict_deterministic():
    bundle = cotangent_bundle(totaro_threefold_fan())
    one = json.dumps(bundle_mds_report(bundle).to_dict(), sort_keys=True)
    two = json.dumps(bundle_mds_report(bundle).to_dict(), sort_keys=True)
    assert one == two
    parsed = json.loads(one)
    assert parsed["verdict"]["verdict"] == "NotMDS"
    assert parsed["pencil_subset"] == [1, 3, 6, 7, 8, 11, 12, 13, 14]
