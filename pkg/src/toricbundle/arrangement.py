"""Linear subspace arrangements in the projective space of the fiber.

A filtration subspace F_j of the fiber F determines the locus where every
quotient map through F/F_j vanishes; in dual coordinates that locus is the
projectivized annihilator of F_j.  Members are stored on the F side, so
locus intersection is subspace sum and locus containment reverses
inclusion.  Position predicates (general position, collinearity, rational
normal curves, pencils of cubics) run in exact arithmetic and drive the
decision rules downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random

from .fan import barycentric_subdivision, projective_space_fan
from .linalg import Field, Matrix, QQ, Subspace


def _scalar_key(x):
    if hasattr(x, "val"):
        return (x.val, 1)
    return (x.numerator, x.denominator)


def _basis_key(subspace: Subspace):
    return tuple(tuple(_scalar_key(x) for x in row) for row in subspace.basis)


@dataclass(frozen=True)
class ProjectiveSubspace:
    """One arrangement member: the fiber subspace plus the rays carrying it."""

    subspace: Subspace
    provenance: tuple = ()

    @property
    def codim(self) -> int:
        """Codimension of the locus in the projective space."""
        return self.subspace.dim

    @property
    def locus_dim(self) -> int:
        return self.subspace.ambient - self.subspace.dim - 1

    @property
    def is_hyperplane(self) -> bool:
        return self.subspace.dim == 1

    @property
    def is_point(self) -> bool:
        return self.locus_dim == 0

    @property
    def multiplicity(self) -> int:
        return max(1, len(self.provenance))

    def locus(self) -> Subspace:
        """The annihilator: homogeneous coordinates of the locus."""
        return self.subspace.annihilator()

    def point_coordinates(self):
        if not self.is_point:
            raise ValueError("member is not a point")
        return self.locus().basis[0]


@dataclass(frozen=True)
class Arrangement:
    field: Field
    rank: int
    members: tuple
    zero_rays: tuple = ()

    def s_members(self):
        """Members of codimension at least 2 (the blowup centers)."""
        return tuple(m for m in self.members if m.codim >= 2)

    def hyperplane_members(self):
        return tuple(m for m in self.members if m.is_hyperplane)

    def points(self):
        return tuple(m.point_coordinates() for m in self.members if m.is_point)


def from_bundle(bundle) -> Arrangement:
    """Collect the nonzero filtration subspaces, merging repetitions."""
    if not bundle.is_normalized():
        raise ValueError("arrangement extraction requires shift-normalized filtrations")
    members = []
    index = {}
    zero_rays = []
    for j, f in enumerate(bundle.filtrations):
        if f.subspace.is_zero():
            zero_rays.append(j)
            continue
        if f.subspace in index:
            pos = index[f.subspace]
            members[pos] = ProjectiveSubspace(f.subspace, members[pos].provenance + (j,))
        else:
            index[f.subspace] = len(members)
            members.append(ProjectiveSubspace(f.subspace, (j,)))
    return Arrangement(bundle.field, bundle.rank, tuple(members), tuple(zero_rays))


def member_from_locus(field, rank, locus_rows, provenance=()) -> ProjectiveSubspace:
    """Member whose locus is the projective span of the given coordinates."""
    span = Subspace.span(field, rank, [list(r) for r in locus_rows])
    if span.dim == 0:
        raise ValueError("empty locus")
    return ProjectiveSubspace(span.annihilator(), provenance)


@dataclass(frozen=True)
class IntersectionPoset:
    """S' with the blowup order: entries ascend in locus dimension."""

    entries: tuple

    def locus_dims(self):
        return tuple(e.locus_dim for e in self.entries)

    def is_closed(self) -> bool:
        subs = {e.subspace for e in self.entries}
        rank = next(iter(subs)).ambient if subs else 0
        for a, b in itertools.combinations(self.entries, 2):
            meet = a.subspace.add(b.subspace)
            if meet.dim < rank and meet not in subs:
                return False
        return True


def intersection_closure(arrangement: Arrangement) -> IntersectionPoset:
    """Close the codim >= 2 members under pairwise locus intersection.

    Locus intersection is subspace sum on the fiber side; sums reaching the
    full fiber correspond to empty loci and are dropped.
    """
    current = {}
    for m in arrangement.s_members():
        current[m.subspace] = m
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(current), 2):
            total = a.add(b)
            if total.dim < arrangement.rank and total not in current:
                current[total] = ProjectiveSubspace(total, ())
                changed = True
    entries = sorted(current.values(), key=lambda m: (m.locus_dim, _basis_key(m.subspace)))
    return IntersectionPoset(tuple(entries))


# ----------------------------------------------------------------------
# position predicates on explicit point lists


def points_pairwise_distinct(points, field) -> bool:
    for p, q in itertools.combinations(points, 2):
        if Matrix(field, [list(p), list(q)]).rank() <= 1:
            return False
    return True


def points_linearly_general(points, field, rank) -> bool:
    """Every subset of at most `rank` points spans a subspace of its size."""
    m = min(len(points), rank)
    for subset in itertools.combinations(points, m):
        if Matrix(field, [list(p) for p in subset]).rank() != m:
            return False
    return True


def points_collinear(points, field) -> bool:
    return Matrix(field, [list(p) for p in points]).rank() <= 2


def common_hyperplane(points, field):
    """A functional vanishing on all points, or None."""
    kernel = Matrix(field, [list(p) for p in points]).kernel_basis()
    if kernel:
        return kernel[0]
    return None


def points_on_rational_normal_curve(points, field):
    """Exact membership test for a common rational normal curve.

    Returns (flag, witness).  With at most r+2 points in linearly general
    position the answer is always yes.  Beyond that, the first r+2 points
    fix a projective frame; in frame coordinates the curve through them is
    t -> (1/(t - t_i))_i, and a further point lies on it iff its inverted
    coordinates are an affine function of the inverted frame parameters.
    A degenerate frame (not linearly general) yields (None, witness).
    """
    r = len(points[0])
    s = len(points)
    if s <= r + 2:
        if points_linearly_general(points, field, r):
            return True, None
        return None, "fewer than r+3 points but not in linearly general position"
    frame = points[: r + 2]
    if not points_linearly_general(frame, field, r):
        return None, "frame points 0..%d are not in linearly general position" % (r + 1)
    b = Matrix(field, [list(p) for p in frame[:r]]).transpose()
    binv = b.inverse()
    gamma = binv.mat_vec(frame[r])
    if not all(gamma):
        return None, "frame normalization degenerate"
    normalize = Matrix(field, [[binv.rows[i][j] / gamma[i] for j in range(r)] for i in range(r)])
    q = normalize.mat_vec(frame[r + 1])
    if not all(q) or len({_scalar_key(qi) for qi in q}) != r:
        # q must avoid the coordinate hyperplanes and have distinct entries
        return None, "frame normalization degenerate"
    inv_q = [field.one / x for x in q]
    for idx in range(r + 2, s):
        x = normalize.mat_vec(points[idx])
        if not all(x):
            # curve points away from the frame have no zero coordinates
            nonzero = [i for i, c in enumerate(x) if c]
            if len(nonzero) == 1:
                continue  # the point is a frame vertex again
            return False, "point %d" % idx
        inv_x = [field.one / c for c in x]
        # solve inv_x = a * inv_q + b from the first two coordinates
        det = inv_q[0] - inv_q[1]
        a = (inv_x[0] - inv_x[1]) / det
        bb = inv_x[0] - a * inv_q[0]
        if all(inv_x[i] == a * inv_q[i] + bb for i in range(r)):
            continue
        return False, "point %d" % idx
    return True, None


@dataclass(frozen=True)
class PositionReport:
    member_count: int
    s_member_count: int
    hyperplane_count: int
    pairwise_distinct: bool
    point_only: bool
    linearly_general: object = None
    collinear: object = None
    on_rational_normal_curve: object = None
    rnc_witness: object = None
    hyperplane_functional: object = None


def position_report(arrangement: Arrangement) -> PositionReport:
    """All applicable position flags; curve predicates only for points."""
    members = arrangement.members
    distinct = all(m.multiplicity == 1 for m in members)
    point_only = bool(members) and all(m.is_point for m in members)
    base = dict(
        member_count=len(members),
        s_member_count=len(arrangement.s_members()),
        hyperplane_count=len(arrangement.hyperplane_members()),
        pairwise_distinct=distinct,
        point_only=point_only,
    )
    if not point_only:
        return PositionReport(**base)
    points = arrangement.points()
    field = arrangement.field
    rnc, witness = points_on_rational_normal_curve(points, field)
    return PositionReport(
        linearly_general=points_linearly_general(points, field, arrangement.rank),
        collinear=points_collinear(points, field),
        on_rational_normal_curve=rnc,
        rnc_witness=witness,
        hyperplane_functional=common_hyperplane(points, field),
        **base,
    )


# ----------------------------------------------------------------------
# pencils of cubics


def _cubic_monomials():
    return [e for e in itertools.product(range(4), repeat=3) if sum(e) == 3]


def _eval_monomial(expo, point, field):
    out = field.one
    for e, c in zip(expo, point):
        for _ in range(e):
            out = out * c
    return out


@dataclass(frozen=True)
class CubicPencilReport:
    cubic_space_dimension: int
    is_pencil: bool
    transverse: bool

    @property
    def is_complete_intersection(self) -> bool:
        return self.is_pencil and self.transverse


def cubic_pencil_check(points, field) -> CubicPencilReport:
    """Do 9 distinct plane points form the reduced complete intersection of
    two cubics?  Computes the kernel of the 9x10 evaluation matrix; a
    2-dimensional kernel is a pencil, and the base locus is reduced when
    the two gradients are independent at every point."""
    if field.char in (2, 3):
        raise ValueError("cubic pencil test requires characteristic not 2 or 3")
    if len(points) != 9:
        raise ValueError("expected exactly 9 points, got %d" % len(points))
    points = [tuple(field.of(c) for c in p) for p in points]
    if any(len(p) != 3 for p in points):
        raise ValueError("points must have 3 homogeneous coordinates")
    if not points_pairwise_distinct(points, field):
        raise ValueError("the 9 points must be pairwise distinct")
    monomials = _cubic_monomials()
    rows = [[_eval_monomial(e, p, field) for e in monomials] for p in points]
    kernel = Matrix(field, rows).kernel_basis()
    dim = len(kernel)
    if dim != 2:
        return CubicPencilReport(dim, False, False)
    transverse = True
    for p in points:
        jac = []
        for cubic in kernel[:2]:
            grad = []
            for var in range(3):
                val = field.zero
                for coeff, expo in zip(cubic, monomials):
                    if expo[var] == 0:
                        continue
                    lowered = list(expo)
                    lowered[var] -= 1
                    val = val + coeff * field.of(expo[var]) * _eval_monomial(tuple(lowered), p, field)
                grad.append(val)
            jac.append(grad)
        if Matrix(field, jac).rank() != 2:
            transverse = False
            break
    return CubicPencilReport(dim, True, transverse)


# ----------------------------------------------------------------------
# builders


def kapranov_arrangement(r: int, characteristic: int = 0) -> Arrangement:
    """Subspaces of codimension >= 2 spanned by subsets of the r+1 frame
    points (standard basis plus all-ones) in the projective space of k^r."""
    if r < 3:
        raise ValueError("the frame arrangement needs r >= 3")
    field = Field(characteristic)
    frame = [tuple(field.one if j == i else field.zero for j in range(r)) for i in range(r)]
    frame.append(tuple(field.one for _ in range(r)))
    members = []
    for size in range(1, r - 1):
        for subset in itertools.combinations(range(r + 1), size):
            members.append(member_from_locus(field, r, [frame[i] for i in subset]))
    return Arrangement(field, r, tuple(members))


def very_general_points(r: int, s: int, seed: int):
    """Deterministic rational points certified for the finitely many
    genericity conditions the downstream decisions consume.

    The certificate lists exactly what was verified; nothing beyond those
    conditions is claimed.  Conditions: pairwise distinct; every subset of
    at most r points spans; and, once s >= r+3, no r+3 of the points lie
    on a common rational normal curve.
    """
    if r < 2:
        raise ValueError("ambient rank must be at least 2")
    if s < 1:
        raise ValueError("need at least one point")
    rng = Random(seed)
    field = QQ
    while True:
        points = []
        for _ in range(s):
            while True:
                p = tuple(field.of(rng.randint(-30, 30)) for _ in range(r))
                if any(p):
                    points.append(p)
                    break
        conditions = []
        if not points_pairwise_distinct(points, field):
            continue
        conditions.append("%d points pairwise distinct" % s)
        if not points_linearly_general(points, field, r):
            continue
        m = min(s, r)
        conditions.append(
            "every %d-subset spans (%d subsets checked)" % (m, _binom(s, m))
        )
        if s >= r + 3:
            ok = True
            for subset in itertools.combinations(range(s), r + 3):
                flag, _ = points_on_rational_normal_curve([points[i] for i in subset], field)
                if flag is not False:
                    ok = False
                    break
            if not ok:
                continue
            conditions.append(
                "no %d points on a common rational normal curve (%d subsets checked)"
                % (r + 3, _binom(s, r + 3))
            )
        return tuple(points), tuple(conditions)


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def losev_manin_subspaces(d: int, characteristic: int = 0):
    """The barycentric fan of projective d-space with, on the ray indexed
    by a subset I, the subspace of functionals vanishing on v_i for i in I.

    Returns (fan, per-ray subspaces).  Ray vectors determine I: a 0/1 ray
    is the sum over I of the basis vectors; a ray with -1 entries includes
    the distinguished index 0."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    field = Field(characteristic)
    fan = barycentric_subdivision(projective_space_fan(d))
    vs = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    vs.insert(0, tuple(-1 for _ in range(d)))
    subspaces = []
    for ray in fan.rays:
        if all(c >= 0 for c in ray):
            index_set = [i + 1 for i, c in enumerate(ray) if c == 1]
        else:
            index_set = [0] + [i + 1 for i, c in enumerate(ray) if c == 0]
        total = tuple(sum(vs[i][j] for i in index_set) for j in range(d))
        if total != ray:
            raise RuntimeError("ray %s does not decode to a subset" % (list(ray),))
        rows = [list(vs[i]) for i in index_set]
        kernel = Matrix(field, rows).kernel_basis()
        subspaces.append(Subspace(field, d, tuple(kernel)))
    return fan, tuple(subspaces)
