"""Exact linear algebra: frozen examples plus randomized invariants.

The determinant oracle below is an independent cofactor expansion used to
freeze and cross-check the Bareiss path.
"""

import random
from fractions import Fraction

import pytest

from toricbundle.linalg import (
    QQ,
    Field,
    FpElement,
    Matrix,
    Subspace,
    int_adjugate,
    int_det,
    int_diagonalize,
    int_solve,
    ivec_primitive,
    max_minor_gcd,
    nonneg_solution_exists,
    simplex_solve,
)


def det_cofactor(rows):
    """Independent oracle: cofactor expansion along the first row."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def test_field_contexts():
    f5 = Field(5)
    assert f5.of(7) == FpElement(2, 5)
    assert f5.of(Fraction(1, 2)) == FpElement(3, 5)  # 1/2 = 3 in F_5
    with pytest.raises(ValueError):
        f5.of(Fraction(1, 5))
    with pytest.raises(ValueError):
        Field(6)
    assert QQ.of("3/4") == Fraction(3, 4)


def test_fp_arithmetic():
    a = FpElement(3, 7)
    b = FpElement(5, 7)
    assert a + b == 1
    assert a * b == 1
    assert a / b == FpElement(2, 7)
    assert (-a) == 4
    with pytest.raises(ValueError):
        a + FpElement(1, 5)


def test_rank_frozen():
    m = Matrix(QQ, [[1, 1, 1], [1, 2, 3], [2, 3, 4]])
    assert m.rank() == 2


def test_kernel_of_ray_matrix():
    # columns e1, e2, -e1-e2
    m = Matrix(QQ, [[1, 0, -1], [0, 1, -1]])
    assert m.kernel_basis() == ((Fraction(1), Fraction(1), Fraction(1)),)


def test_kernel_over_f5_zero_row():
    m = Matrix(Field(5), [[0, 0]])
    assert len(m.kernel_basis()) == 2


def test_det_frozen_values():
    rows1 = [[0, 0, 1], [1, 1, 1], [-1, -2, -2]]
    assert det_cofactor(rows1) == -1
    assert Matrix(QQ, rows1).det() == -1
    rows2 = [[0, -1, 1], [1, 1, 1], [-1, -2, -2]]
    assert Matrix(QQ, rows2).det() == det_cofactor(rows2)


def test_det_bareiss_vs_cofactor_random():
    rng = random.Random(20260818)
    for _ in range(200):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert int_det(rows) == det_cofactor(rows)
        assert Matrix(QQ, rows).det() == det_cofactor(rows)


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(120):
        nr = rng.randint(1, 5)
        nc = rng.randint(1, 5)
        field = rng.choice([QQ, Field(5), Field(2)])
        m = Matrix(field, [[rng.randint(-6, 6) for _ in range(nc)] for _ in range(nr)])
        assert m.rank() + len(m.kernel_basis()) == nc
        for v in m.kernel_basis():
            assert not any(m.mat_vec(v))


def random_unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            f = rng.randint(-2, 2)
            m[i] = [a + f * b for a, b in zip(m[i], m[j])]
    return m


def test_rref_idempotent_and_invariant():
    rng = random.Random(99)
    for _ in range(80):
        nr = rng.randint(1, 4)
        nc = rng.randint(1, 5)
        m = Matrix(QQ, [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)])
        red = m.row_space_canonical()
        assert red.row_space_canonical() == red
        u = Matrix(QQ, random_unimodular(rng, nr))
        assert u.mat_mul(m).row_space_canonical() == red


def test_solve_and_inverse():
    m = Matrix(QQ, [[2, 1], [1, 1]])
    assert m.solve_right([3, 2]) == (Fraction(1), Fraction(1))
    inv = m.inverse()
    assert m.mat_mul(inv) == Matrix.identity(QQ, 2)
    assert Matrix(QQ, [[1, 1], [1, 1]]).solve_right([0, 1]) is None


def test_subspace_canonical_equality():
    a = Subspace.span(QQ, 3, [[1, 1, 0], [0, 0, 1]])
    b = Subspace.span(QQ, 3, [[2, 2, 2], [0, 0, 5], [1, 1, 3]])
    assert a == b
    assert hash(a) == hash(b)
    assert a.contains_vector([3, 3, -1])
    assert not a.contains_vector([1, 0, 0])


def test_subspace_operations():
    u = Subspace.span(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    v = Subspace.span(QQ, 3, [[0, 1, 0], [0, 0, 1]])
    w = u.intersect(v)
    assert w == Subspace.span(QQ, 3, [[0, 1, 0]])
    assert u.add(v).is_full()
    ann = u.annihilator()
    assert ann == Subspace.span(QQ, 3, [[0, 0, 1]])
    z = Subspace.zero(QQ, 3)
    assert z.intersect(u) == z
    assert z.add(u) == u


def test_subspace_random_modular_law_checks():
    # dim(U+V) + dim(U cap V) = dim U + dim V, over Q and F_p
    rng = random.Random(13)
    for _ in range(100):
        field = rng.choice([QQ, Field(3), Field(7)])
        amb = rng.randint(1, 4)
        u = Subspace.span(
            field, amb, [[rng.randint(-4, 4) for _ in range(amb)] for _ in range(rng.randint(0, amb))]
        )
        v = Subspace.span(
            field, amb, [[rng.randint(-4, 4) for _ in range(amb)] for _ in range(rng.randint(0, amb))]
        )
        assert u.add(v).dim + u.intersect(v).dim == u.dim + v.dim
        assert u.add(v).contains(u)
        assert u.contains(u.intersect(v))


def test_primitive_vector():
    assert ivec_primitive([2, 4, -6]) == (1, 2, -3)
    assert ivec_primitive([0, -3]) == (0, -1)
    with pytest.raises(ValueError):
        ivec_primitive([0, 0])


def test_adjugate_identity():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        d = int_det(rows)
        adj = int_adjugate(rows)
        prod = [
            [sum(adj[i][k] * rows[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        for i in range(n):
            for j in range(n):
                assert prod[i][j] == (d if i == j else 0)


def test_int_diagonalize_and_solve():
    rng = random.Random(31)
    for _ in range(80):
        nr = rng.randint(1, 4)
        nc = rng.randint(1, 4)
        a = [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)]
        d, u, v = int_diagonalize(a)
        # D = U A V
        ua = [[sum(u[i][k] * a[k][j] for k in range(nr)) for j in range(nc)] for i in range(nr)]
        uav = [[sum(ua[i][k] * v[k][j] for k in range(nc)) for j in range(nc)] for i in range(nr)]
        for i in range(nr):
            for j in range(nc):
                assert uav[i][j] == d[i][j]
                if i != j:
                    assert d[i][j] == 0
        assert abs(int_det(u)) == 1
        assert abs(int_det(v)) == 1
        # solve with a known-consistent right-hand side
        x0 = [rng.randint(-3, 3) for _ in range(nc)]
        b = [sum(a[i][j] * x0[j] for j in range(nc)) for i in range(nr)]
        x = int_solve(a, b)
        assert x is not None
        assert all(isinstance(t, int) for t in x)
        assert [sum(a[i][j] * x[j] for j in range(nc)) for i in range(nr)] == b


def test_max_minor_gcd():
    assert max_minor_gcd([[1, 0, 0], [0, 1, 0]]) == 1
    assert max_minor_gcd([[2, 0], [0, 2]]) == 4
    assert max_minor_gcd([[1, 2, 3]]) == 1
    assert max_minor_gcd([[2, 4, 6]]) == 2


def test_simplex_basics():
    # max x1 + x2 with x1 + x2 <= 1 via min -(x1+x2), x1 + x2 + s = 1
    status, x, val = simplex_solve([[1, 1, 1]], [1], [-1, -1, 0])
    assert status == "optimal"
    assert val == -1
    assert nonneg_solution_exists([[1, 1], [1, -1]], [2, 0])
    assert not nonneg_solution_exists([[1, 1]], [-1])
    # unbounded: min -x with x free to grow
    status, _, _ = simplex_solve([[0, 1]], [1], [-1, 0])
    assert status == "unbounded"


def test_simplex_infeasible_equalities():
    assert not nonneg_solution_exists([[1, 0], [1, 0]], [1, 2])


def test_simplex_random_feasibility_agrees_with_construction():
    rng = random.Random(777)
    for _ in range(60):
        m_eq = rng.randint(1, 3)
        n = rng.randint(2, 5)
        x0 = [rng.randint(0, 4) for _ in range(n)]
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m_eq)]
        b = [sum(a[i][j] * x0[j] for j in range(n)) for i in range(m_eq)]
        assert nonneg_solution_exists(a, b)


def test_integer_feasibility_matches_fraction_simplex():
    # the all-integer fast path must agree with the generic two-phase solver
    rng = random.Random(1234)
    for _ in range(300):
        m_eq = rng.randint(1, 4)
        n = rng.randint(1, 6)
        a = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m_eq)]
        b = [rng.randint(-5, 5) for _ in range(m_eq)]
        status, _, _ = simplex_solve(a, b, [Fraction(0)] * n)
        assert nonneg_solution_exists(a, b) == (status == "optimal")


def test_feasibility_degenerate_systems():
    assert nonneg_solution_exists([], [])
    assert nonneg_solution_exists([[0, 0]], [0])
    assert not nonneg_solution_exists([[0, 0]], [1])
    # rational data falls back to the generic solver
    assert nonneg_solution_exists([[Fraction(1, 2), 1]], [Fraction(3, 2)])
    assert not nonneg_solution_exists([[Fraction(1, 2)]], [Fraction(-1, 2)])
