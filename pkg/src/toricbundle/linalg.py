"""Exact linear algebra over the rationals and over prime fields.

Scalars are either fractions.Fraction (characteristic 0) or FpElement
(characteristic p).  No floating point is used anywhere.  Matrices are
immutable row tuples; the reduced row echelon form is the canonical
representative used for subspace equality throughout the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FpElement:
    """An element of the prime field F_p."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _check(self, other: "FpElement"):
        if self.p != other.p:
            raise ValueError("mixed characteristics %d and %d" % (self.p, other.p))

    def __add__(self, other):
        if isinstance(other, FpElement):
            self._check(other)
            return FpElement(self.val + other.val, self.p)
        if isinstance(other, int):
            return FpElement(self.val + other, self.p)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FpElement):
            self._check(other)
            return FpElement(self.val - other.val, self.p)
        if isinstance(other, int):
            return FpElement(self.val - other, self.p)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return FpElement(other - self.val, self.p)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FpElement):
            self._check(other)
            return FpElement(self.val * other.val, self.p)
        if isinstance(other, int):
            return FpElement(self.val * other, self.p)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "FpElement":
        if self.val == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpElement(pow(self.val, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = FpElement(other, self.p)
        if isinstance(other, FpElement):
            self._check(other)
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return FpElement(other, self.p) * self.inverse()
        return NotImplemented

    def __pow__(self, e: int):
        return FpElement(pow(self.val, e, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.val, self.p)

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(self.val)

    def __repr__(self):
        return str(self.val)


class Field:
    """Arithmetic context: the rationals (char 0) or F_p for an explicit prime p.

    Rationals are never reduced mod p implicitly; conversion into F_p raises
    when the denominator is divisible by p.
    """

    def __init__(self, char: int = 0):
        if char != 0 and not _is_prime(char):
            raise ValueError("characteristic must be 0 or a prime, got %r" % (char,))
        self.char = char

    def of(self, x):
        """Coerce an int, Fraction, decimal/fraction string, or element."""
        if self.char == 0:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, (int, str)):
                return Fraction(x)
            if isinstance(x, FpElement):
                raise ValueError("cannot coerce an F_p element into the rationals")
            raise TypeError("cannot coerce %r into Q" % (x,))
        p = self.char
        if isinstance(x, FpElement):
            if x.p != p:
                raise ValueError("element of F_%d used in F_%d context" % (x.p, p))
            return x
        if isinstance(x, int):
            return FpElement(x, p)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ValueError(
                    "denominator %d is divisible by %d; no image in F_%d"
                    % (x.denominator, p, p)
                )
            return FpElement(x.numerator, p) / FpElement(x.denominator, p)
        raise TypeError("cannot coerce %r into F_%d" % (x, p))

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else FpElement(0, self.char)

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else FpElement(1, self.char)

    def __eq__(self, other):
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else "GF(%d)" % self.char


QQ = Field(0)


def scalar_to_str(x) -> str:
    """Canonical string form of a field element ("3", "-1/2", ...)."""
    return str(x)


class Matrix:
    """Immutable exact matrix over a Field."""

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = tuple(tuple(field.of(x) for x in row) for row in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged rows")
        self._rref = None

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return "Matrix(%r, %s)" % (self.field, [list(map(str, r)) for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [])

    def mat_mul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.rows))
        return Matrix(
            self.field,
            [[_dot(r, c, self.field) for c in ot] for r in self.rows],
        )

    def mat_vec(self, vec):
        vec = [self.field.of(x) for x in vec]
        return tuple(_dot(r, vec, self.field) for r in self.rows)

    def rref(self):
        """Reduced row echelon form.  Returns (Matrix, pivot column tuple)."""
        if self._rref is None:
            m = [list(r) for r in self.rows]
            nr, nc = len(m), self.ncols
            pivots = []
            r = 0
            for c in range(nc):
                pr = None
                for i in range(r, nr):
                    if m[i][c]:
                        pr = i
                        break
                if pr is None:
                    continue
                m[r], m[pr] = m[pr], m[r]
                inv = self.field.one / m[r][c]
                m[r] = [inv * x for x in m[r]]
                for i in range(nr):
                    if i != r and m[i][c]:
                        f = m[i][c]
                        m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                pivots.append(c)
                r += 1
                if r == nr:
                    break
            self._rref = (Matrix(self.field, m), tuple(pivots))
        return self._rref

    def rank(self) -> int:
        if self.field.char == 0 and self._all_integral():
            return _int_rank([[x.numerator for x in row] for row in self.rows])
        return len(self.rref()[1])

    def _all_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows == 0:
            return self.field.one
        if self.field.char == 0 and self._all_integral():
            return Fraction(int_det([[x.numerator for x in row] for row in self.rows]))
        return self._det_gauss()

    def _det_gauss(self):
        m = [list(r) for r in self.rows]
        n = len(m)
        det = self.field.one
        for c in range(n):
            pr = None
            for i in range(c, n):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                return self.field.zero
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = -det
            det = det * m[c][c]
            inv = self.field.one / m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det

    def row_space_canonical(self) -> "Matrix":
        """RREF with zero rows dropped: the canonical basis of the row space."""
        red, pivots = self.rref()
        return Matrix(self.field, red.rows[: len(pivots)])

    def kernel_basis(self):
        """Canonical basis of {x : A x = 0}, as a tuple of row vectors."""
        red, pivots = self.rref()
        nc = self.ncols
        free = [c for c in range(nc) if c not in pivots]
        vecs = []
        for f in free:
            v = [self.field.zero] * nc
            v[f] = self.field.one
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            vecs.append(v)
        if not vecs:
            return ()
        return Matrix(self.field, vecs).row_space_canonical().rows

    def solve_right(self, b):
        """One exact solution x of A x = b (free coordinates set to 0), or None."""
        b = [self.field.of(x) for x in b]
        if len(b) != self.nrows:
            raise ValueError("length mismatch")
        aug = Matrix(self.field, [list(r) + [bi] for r, bi in zip(self.rows, b)])
        red, pivots = aug.rref()
        nc = self.ncols
        if nc in pivots:
            return None
        x = [self.field.zero] * nc
        for i, p in enumerate(pivots):
            x[p] = red.rows[i][nc]
        return tuple(x)

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = Matrix(
            self.field,
            [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)],
        )
        red, pivots = aug.rref()
        if tuple(pivots) != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(self.field, [r[n:] for r in red.rows])


def _dot(a, b, field):
    acc = field.zero
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


class Subspace:
    """A linear subspace of field^ambient in canonical (RREF basis) form."""

    def __init__(self, field: Field, ambient: int, rows=()):
        self.field = field
        self.ambient = ambient
        basis = Matrix(field, rows).row_space_canonical() if rows else None
        self.basis = basis.rows if basis is not None else ()
        for r in self.basis:
            if len(r) != ambient:
                raise ValueError("vector length does not match ambient dimension")

    @classmethod
    def span(cls, field: Field, ambient: int, vectors) -> "Subspace":
        return cls(field, ambient, list(vectors))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient)

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.identity(field, ambient).rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.basis)

    def contains_vector(self, v) -> bool:
        v = [self.field.of(x) for x in v]
        if not any(v):
            return True
        stacked = Matrix(self.field, list(self.basis) + [v])
        return stacked.rank() == self.dim

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.basis)

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        ann = list(self.annihilator().basis) + list(other.annihilator().basis)
        if not ann:
            return Subspace.full(self.field, self.ambient)
        return Subspace(self.field, self.ambient, Matrix(self.field, ann).kernel_basis())

    def annihilator(self) -> "Subspace":
        """The annihilator {f : f(v) = 0 for all v in self} inside the dual space."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        return Subspace(self.field, self.ambient, self.matrix().kernel_basis())

    def _check(self, other: "Subspace"):
        if self.field != other.field or self.ambient != other.ambient:
            raise ValueError("subspaces live in different spaces")

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return "Subspace(%r, %d, %s)" % (
            self.field,
            self.ambient,
            [list(map(str, r)) for r in self.basis],
        )


# ----------------------------------------------------------------------
# integer-level helpers (fraction-free paths)


def ivec_primitive(v):
    """Divide an integer vector by the gcd of its entries, preserving signs."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def int_det(rows) -> int:
    """Exact determinant of an integer matrix, Bareiss fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pr is None:
                return 0
            m[k], m[pr] = m[pr], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _int_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(map(int, r)) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    rank = 0
    row = 0
    for col in range(nc):
        pr = next((i for i in range(row, nr) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[row], m[pr] = m[pr], m[row]
        for i in range(row + 1, nr):
            if m[i][col]:
                a, b = m[row][col], m[i][col]
                m[i] = [a * y - b * x for x, y in zip(m[row], m[i])]
        rank += 1
        row += 1
        if row == nr:
            break
    return rank


def int_adjugate(rows):
    """Adjugate of a square integer matrix: adj(A) A = det(A) I."""
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            adj[i][j] = (-1) ** (i + j) * int_det(minor)
    return adj


def max_minor_gcd(rows) -> int:
    """gcd of all maximal (k x k, k = number of rows) minors of a k x d integer matrix."""
    k = len(rows)
    d = len(rows[0]) if rows else 0
    if k > d:
        raise ValueError("more rows than columns")
    g = 0
    for cols in itertools.combinations(range(d), k):
        g = gcd(g, abs(int_det([[row[c] for c in cols] for row in rows])))
        if g == 1:
            return 1
    return g


def int_diagonalize(rows):
    """Diagonalize an integer matrix with unimodular row/column operations.

    Returns (D, U, V) with D = U A V, U and V unimodular.  D is diagonal
    (no divisibility normalization; enough for solving linear systems).
    """
    a = [list(map(int, r)) for r in rows]
    nr = len(a)
    nc = len(a[0]) if a else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        u[t], u[i] = u[i], u[t]
        for r in range(nr):
            a[r][t], a[r][j] = a[r][j], a[r][t]
        for r in range(nc):
            v[r][t], v[r][j] = v[r][j], v[r][t]
        while True:
            # clear column t
            done = True
            for i in range(nr):
                if i != t and a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        done = False
            # clear row t
            for j in range(nc):
                if j != t and a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    for r in range(nr):
                        a[r][j] -= q * a[r][t]
                    for r in range(nc):
                        v[r][j] -= q * v[r][t]
                    if a[t][j] != 0:
                        for r in range(nr):
                            a[r][t], a[r][j] = a[r][j], a[r][t]
                        for r in range(nc):
                            v[r][t], v[r][j] = v[r][j], v[r][t]
                        done = False
            if done and all(a[i][t] == 0 for i in range(nr) if i != t) and all(
                a[t][j] == 0 for j in range(nc) if j != t
            ):
                break
        t += 1
    return a, u, v


def int_solve(rows, b):
    """One integer solution x of A x = b, or None if none exists."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    if len(b) != nr:
        raise ValueError("length mismatch")
    d, u, v = int_diagonalize(rows)
    ub = [sum(u[i][k] * b[k] for k in range(nr)) for i in range(nr)]
    y = [0] * nc
    for i in range(nr):
        di = d[i][i] if i < nc else 0
        if di == 0:
            if ub[i] != 0:
                return None
            continue
        if ub[i] % di != 0:
            return None
        if i < nc:
            y[i] = ub[i] // di
    return tuple(sum(v[i][k] * y[k] for k in range(nc)) for i in range(nc))


# ----------------------------------------------------------------------
# exact linear programming (two-phase simplex, Bland's rule)


def _pivot(tab, basis, row, col):
    n = len(tab[0])
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col]:
            f = tab[i][col]
            tab[i] = [a - f * b for a, b in zip(tab[i], tab[row])]
    basis[row] = col


def _simplex_core(tab, basis, cost):
    """Minimize cost over the tableau; Bland's rule, hence always terminates."""
    m = len(tab)
    n = len(tab[0]) - 1 if tab else len(cost)
    while True:
        red = list(cost[:n])
        obj = Fraction(0)
        for i, bv in enumerate(basis):
            cb = cost[bv]
            if cb:
                row = tab[i]
                for j in range(n):
                    if row[j]:
                        red[j] -= cb * row[j]
                obj += cb * row[n]
        col = next((j for j in range(n) if red[j] < 0), None)
        if col is None:
            return obj, True
        row_i = None
        best = None
        for i in range(m):
            if tab[i][col] > 0:
                ratio = tab[i][n] / tab[i][col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row_i]):
                    best = ratio
                    row_i = i
        if row_i is None:
            return None, False  # unbounded
        _pivot(tab, basis, row_i, col)


def simplex_solve(a_rows, b, c):
    """min c.x subject to A x = b, x >= 0, all data exact rationals.

    Returns (status, x, value) with status one of "optimal", "infeasible",
    "unbounded".
    """
    m = len(a_rows)
    n = len(a_rows[0]) if a_rows else len(c)
    a = [[Fraction(x) for x in row] for row in a_rows]
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # phase 1 with artificial variables
    tab = [a[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    val, ok = _simplex_core(tab, basis, cost1)
    if not ok or val != 0:
        return "infeasible", None, None
    # drive leftover artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j]), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [[tab[i][j] for j in range(n)] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    val, ok = _simplex_core(tab, basis, c)
    if not ok:
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = tab[i][-1]
    return "optimal", tuple(x), val


def _int_phase1_feasible(a_rows, b) -> bool:
    """Phase-1 feasibility of {x >= 0 : A x = b} for integer data.

    Fraction-free integer pivoting: the tableau stays integral and equals
    det times the rational tableau, where det is the last pivot value.
    Bland's rule (smallest entering column, ties in the ratio test broken
    by smallest basic variable) guarantees termination.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if a_rows else 0
    tab = []
    for i in range(m):
        if b[i] >= 0:
            row = list(a_rows[i]) + [0] * m + [b[i]]
        else:
            row = [-x for x in a_rows[i]] + [0] * m + [-b[i]]
        row[n + i] = 1
        tab.append(row)
    # reduced-cost row for minimizing the artificial sum
    obj = [-sum(tab[i][j] for i in range(m)) for j in range(n)]
    obj += [0] * m + [-sum(tab[i][-1] for i in range(m))]
    tab.append(obj)
    basis = list(range(n, n + m))
    width = n + m + 1
    det = 1
    while True:
        if tab[m][-1] == 0:
            return True
        # artificial columns never re-enter: a zero optimum survives fixing
        # any variable that is currently zero
        col = next((j for j in range(n) if tab[m][j] < 0), None)
        if col is None:
            return False
        row = None
        for i in range(m):
            if tab[i][col] <= 0:
                continue
            if row is None:
                row = i
                continue
            lhs = tab[i][-1] * tab[row][col]
            rhs = tab[row][-1] * tab[i][col]
            if lhs < rhs or (lhs == rhs and basis[i] < basis[row]):
                row = i
        if row is None:
            return False
        piv = tab[row][col]
        prow = tab[row]
        for i in range(m + 1):
            if i == row:
                continue
            f = tab[i][col]
            ti = tab[i]
            tab[i] = [(ti[j] * piv - f * prow[j]) // det for j in range(width)]
        det = piv
        basis[row] = col


def nonneg_solution_exists(a_rows, b) -> bool:
    """Is {x >= 0 : A x = b} nonempty?  Exact phase-1 feasibility."""
    n = len(a_rows[0]) if a_rows else 0
    if all(isinstance(x, int) for row in a_rows for x in row) and all(
        isinstance(x, int) for x in b
    ):
        return _int_phase1_feasible(a_rows, b)
    status, _, _ = simplex_solve(a_rows, b, [Fraction(0)] * n)
    return status == "optimal"
