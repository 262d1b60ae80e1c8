import itertools
import random

import pytest

from toricbundle.linalg import QQ, Matrix, nonneg_solution_exists
from toricbundle.fan import (
    Cone,
    Fan,
    barycentric_subdivision,
    cone_coefficients,
    extend_with_apexes,
    fans_equal_up_to_ray_order,
    is_complete,
    is_projective,
    is_smooth,
    is_smooth_star_point,
    minimal_containing_cone,
    p1p1_iterated_blowup_fan,
    product_p1_fan,
    projective_space_fan,
    stellar_subdivide,
    totaro_fan_sequence,
    totaro_threefold_fan,
    validate_fan,
)


def face_to_face_oracle(fan, ca, cb):
    """LP-only reimplementation of the pairwise face condition.

    The pair meets in the common face iff no generator of either cone
    outside the shared set can appear with coefficient 1 in a point of the
    intersection.  Used to cross-check the integer fast path.
    """
    shared = set(ca.rays) & set(cb.rays)
    for left, right in ((ca, cb), (cb, ca)):
        gl = fan.generators(left)
        gr = fan.generators(right)
        for t, i in enumerate(left.rays):
            if i in shared:
                continue
            rows = []
            for c in range(fan.dim):
                rows.append([g[c] for g in gl] + [-g[c] for g in gr])
            rows.append([1 if s == t else 0 for s in range(len(gl))] + [0] * len(gr))
            if nonneg_solution_exists(rows, [0] * fan.dim + [1]):
                return False
    return True


def support_function_strictly_convex(fan, witness):
    """Global strictness: for each maximal cone the linear function agreeing
    with the witness on the cone's rays must exceed the witness on every
    other ray.  Independent of the wall-by-wall LP inside is_projective."""
    for cone in fan.max_cones:
        gens = Matrix(QQ, fan.generators(cone))
        u = gens.solve_right([witness[i] for i in cone.rays])
        assert u is not None
        for j in range(fan.n_rays):
            if j in cone.rays:
                continue
            val = sum(a * b for a, b in zip(u, fan.rays[j]))
            if not val > witness[j]:
                return False
    return True


def test_p2_fan_predicates():
    fan = projective_space_fan(2)
    assert fan.rays == ((1, 0), (0, 1), (-1, -1))
    assert validate_fan(fan).ok
    smooth, bad = is_smooth(fan)
    assert smooth and bad is None
    assert is_complete(fan)
    flag, witness = is_projective(fan)
    assert flag
    assert support_function_strictly_convex(fan, witness)


def test_incomplete_after_removing_a_cone():
    fan = projective_space_fan(2)
    partial = Fan(2, fan.rays, fan.max_cones[:-1])
    assert validate_fan(partial).ok
    assert not is_complete(partial)
    # the missing cone is spanned by rays 1 and 2: its interior is uncovered
    missing = (-1, 0)  # interior of the removed cone((0,1), (-1,-1))
    assert all(cone_coefficients(partial, c, missing) is None for c in partial.max_cones)


def test_duplicate_and_nonprimitive_rays_flagged():
    fan = Fan(2, ((1, 0), (0, 1), (1, 0)), (Cone((0, 1)),))
    report = validate_fan(fan)
    assert "rays 0 and 2 are equal" in report.violations
    fan2 = Fan(2, ((2, 4), (0, 1)), (Cone((0, 1)),))
    report2 = validate_fan(fan2)
    assert any("not primitive" in v for v in report2.violations)
    fan3 = Fan(2, ((0, 0), (0, 1)), (Cone((0, 1)),))
    assert any("zero vector" in v for v in validate_fan(fan3).violations)


def test_overlapping_cones_flagged():
    # cone((1,0),(1,2)) and cone((1,1),(0,1)) overlap in a 2-dimensional set
    fan = Fan(2, ((1, 0), (1, 2), (1, 1), (0, 1)), (Cone((0, 1)), Cone((2, 3))))
    report = validate_fan(fan)
    assert report.violations == ("intersection of maximal cones 0 and 1 is not a face",)


def test_nested_and_nonsimplicial_flagged():
    fan = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)), Cone((0,))))
    assert any("contained in" in v for v in validate_fan(fan).violations)
    fan2 = Fan(2, ((1, 0), (0, 1), (1, 1)), (Cone((0, 1, 2)),))
    assert any("not simplicial" in v for v in validate_fan(fan2).violations)
    fan3 = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)), Cone((0, 1))))
    assert any("are equal" in v for v in validate_fan(fan3).violations)


def test_face_to_face_fast_path_agrees_with_lp_oracle():
    fans = [
        projective_space_fan(3),
        p1p1_iterated_blowup_fan(),
        totaro_fan_sequence()[0][4],
    ]
    for fan in fans:
        assert validate_fan(fan).ok
        for ca, cb in itertools.combinations(fan.max_cones, 2):
            assert face_to_face_oracle(fan, ca, cb)
    bad = Fan(2, ((1, 0), (1, 2), (1, 1), (0, 1)), (Cone((0, 1)), Cone((2, 3))))
    assert not face_to_face_oracle(bad, bad.max_cones[0], bad.max_cones[1])


def test_completeness_against_coverage_sampling():
    rng = random.Random(20260818)
    complete_fans = [projective_space_fan(2), projective_space_fan(3), product_p1_fan(2)]
    for fan in complete_fans:
        assert is_complete(fan)
        for _ in range(50):
            v = tuple(rng.randint(-7, 7) for _ in range(fan.dim))
            if not any(v):
                continue
            assert any(cone_coefficients(fan, c, v) is not None for c in fan.max_cones)


def test_minimal_containing_cone_on_subdivision_chain():
    fans, _ = totaro_fan_sequence()
    cone, coeffs = minimal_containing_cone(fans[0], (1, 1, 2))
    assert cone == Cone((0, 2))  # rays (0,0,1) and (1,1,1)
    assert coeffs == (1, 1)
    cone5, coeffs5 = minimal_containing_cone(fans[1], (0, -1, 1))
    assert cone5 == Cone((0, 3, 4))
    assert coeffs5 == (1, 1, 1)


def test_minimal_containing_cone_boundary_and_errors():
    fan = projective_space_fan(2)
    cone, coeffs = minimal_containing_cone(fan, (3, 0))
    assert cone == Cone((0,)) and coeffs == (3,)
    with pytest.raises(ValueError):
        minimal_containing_cone(fan, (0, 0))
    half = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)),))
    with pytest.raises(ValueError):
        minimal_containing_cone(half, (-1, 0))


def test_stellar_subdivision_of_p2():
    fan = projective_space_fan(2)
    blown = stellar_subdivide(fan, (1, 1))
    assert blown.rays == ((1, 0), (0, 1), (-1, -1), (1, 1))
    expected = {(0, 3), (1, 3), (1, 2), (0, 2)}
    assert {c.rays for c in blown.max_cones} == expected
    assert validate_fan(blown).ok
    assert is_smooth(blown)[0] and is_complete(blown)
    flag, witness = is_projective(blown)
    assert flag and support_function_strictly_convex(blown, witness)


def test_stellar_subdivision_rejects_bad_vectors():
    fan = projective_space_fan(2)
    with pytest.raises(ValueError):
        stellar_subdivide(fan, (2, 2))
    with pytest.raises(ValueError):
        stellar_subdivide(fan, (1, 0))
    with pytest.raises(ValueError):
        stellar_subdivide(fan, (0, 0))


def test_smooth_star_points_on_p2():
    fan = projective_space_fan(2)
    assert is_smooth_star_point(fan, (1, 1))
    assert is_smooth_star_point(fan, (0, -1))  # (1,0) + (-1,-1)
    assert not is_smooth_star_point(fan, (2, 1))
    assert not is_smooth_star_point(fan, (1, 2))
    assert not is_smooth_star_point(fan, (1, 0))  # already a ray
    assert not is_smooth_star_point(fan, (2, 2))  # not primitive


def test_barycentric_subdivision_of_p2_is_the_hexagon():
    fan = barycentric_subdivision(projective_space_fan(2))
    assert fan.n_rays == 6
    assert len(fan.max_cones) == 6
    hexagon = Fan(
        2,
        ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)),
        tuple(Cone((i, (i + 1) % 6)) for i in range(6)),
    )
    assert validate_fan(hexagon).ok
    assert fans_equal_up_to_ray_order(fan, hexagon)
    assert is_smooth(fan)[0] and is_complete(fan)


def test_barycentric_subdivision_of_p3():
    fan = barycentric_subdivision(projective_space_fan(3))
    assert fan.n_rays == 14  # nonempty proper subsets of 4 rays: 2^4 - 2
    assert len(fan.max_cones) == 24  # 4 cones times 3! flags
    assert validate_fan(fan).ok
    assert is_smooth(fan)[0] and is_complete(fan)


def test_apex_extension_of_p1():
    fan = extend_with_apexes(projective_space_fan(1))
    assert fan.rays == ((1, 0), (-1, 0), (1, 1), (1, -1))
    assert len(fan.max_cones) == 4
    assert is_smooth(fan)[0] and is_complete(fan)


def test_apex_extension_preserves_smooth_complete():
    fan = extend_with_apexes(projective_space_fan(2))
    assert fan.dim == 3 and fan.n_rays == 5
    assert len(fan.max_cones) == 6
    assert is_smooth(fan)[0] and is_complete(fan)
    again = extend_with_apexes(fan)
    assert again.dim == 4 and again.n_rays == 7
    assert is_smooth(again)[0] and is_complete(again)


def test_apex_extension_requires_smooth_complete():
    with pytest.raises(ValueError):
        extend_with_apexes(Fan(2, ((1, 0), (1, 2)), (Cone((0, 1)),)))
    incomplete = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)),))
    with pytest.raises(ValueError):
        extend_with_apexes(incomplete)


def test_iterated_blowup_surface_fan():
    fan = p1p1_iterated_blowup_fan()
    assert fan.rays == (
        (1, 0),
        (0, 1),
        (1, 1),
        (1, 2),
        (2, 1),
        (1, 3),
        (2, 3),
        (3, 2),
        (3, 1),
        (-1, 0),
        (0, -1),
    )
    assert len(fan.max_cones) == 11
    assert validate_fan(fan).ok
    assert is_smooth(fan)[0] and is_complete(fan)
    flag, witness = is_projective(fan)
    assert flag and support_function_strictly_convex(fan, witness)


def test_totaro_subdivision_sequence():
    fans, steps = totaro_fan_sequence()
    assert len(fans) == 11 and len(steps) == 10
    for step in steps:
        assert all(c == 1 for c in step.coeffs)
    for prev, step in zip(fans, steps):
        assert is_smooth_star_point(prev, step.vector)
    final = fans[-1]
    assert final is not None
    assert final.n_rays == 14
    assert len(final.max_cones) == 24
    assert validate_fan(final).ok
    assert is_smooth(final)[0] and is_complete(final)
    assert totaro_threefold_fan().rays == final.rays


def test_totaro_rays_match_the_grid_projection():
    # each of the ten added rays w satisfies w = (a, b, c) with (a - c, b - c)
    # in the 3x3 grid {-1,0,1}^2 after the fixed change of coordinates used
    # for the plane projection; here just freeze the ray list
    final = totaro_threefold_fan()
    assert final.rays == (
        (0, 0, 1),
        (0, 1, 0),
        (1, 1, 1),
        (-1, -2, -2),
        (1, 1, 2),
        (0, -1, 1),
        (1, 0, 1),
        (1, -1, 1),
        (-1, -2, -1),
        (-1, -1, 0),
        (-1, -1, 1),
        (-1, 0, 1),
        (-1, 1, 1),
        (0, 1, 1),
    )


def test_ray_reorder_round_trip():
    rng = random.Random(7)
    fan = p1p1_iterated_blowup_fan()
    order = list(range(fan.n_rays))
    rng.shuffle(order)
    shuffled = fan.with_ray_order(order)
    assert validate_fan(shuffled).ok
    assert fans_equal_up_to_ray_order(fan, shuffled)
    assert is_complete(shuffled) and is_smooth(shuffled)[0]
    assert not fans_equal_up_to_ray_order(fan, projective_space_fan(2))


def test_random_star_subdivisions_stay_smooth_and_complete():
    rng = random.Random(99)
    fan = projective_space_fan(3)
    for _ in range(4):
        cone = fan.max_cones[rng.randrange(len(fan.max_cones))]
        size = rng.randint(2, 3)
        picks = rng.sample(list(cone.rays), size)
        v = tuple(sum(fan.rays[i][c] for i in picks) for c in range(3))
        if v in fan.rays:
            continue
        assert is_smooth_star_point(fan, v)
        fan = stellar_subdivide(fan, v)
        assert is_smooth(fan)[0] and is_complete(fan)


def test_product_fan():
    fan = product_p1_fan(2)
    assert fan.rays == ((1, 0), (0, 1), (-1, 0), (0, -1))
    assert len(fan.max_cones) == 4
    assert validate_fan(fan).ok
    assert is_smooth(fan)[0] and is_complete(fan)
    cube = product_p1_fan(3)
    assert len(cube.max_cones) == 8
    assert is_complete(cube)


def test_projectivity_requires_completeness():
    half = Fan(2, ((1, 0), (0, 1)), (Cone((0, 1)),))
    with pytest.raises(ValueError):
        is_projective(half)
