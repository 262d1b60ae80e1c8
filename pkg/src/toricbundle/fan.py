"""Fans of strongly convex rational polyhedral cones, exactly.

Rays are primitive integer vectors, maximal cones are index tuples into the
ray list.  All predicates are decided in exact arithmetic: smoothness via
minor gcds, completeness via the wall criterion (valid for the simplicial
fans that are this package's entire scope), projectivity via an exact
rational LP for a strictly convex piecewise linear support function, and
face-to-face validity via integer separating functionals with an exact LP
fallback.  Simplicial cones have linearly independent generators, so strong
convexity is automatic once simpliciality holds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import (
    QQ,
    Matrix,
    int_adjugate,
    int_det,
    ivec_primitive,
    max_minor_gcd,
    nonneg_solution_exists,
    simplex_solve,
)


@dataclass(frozen=True)
class Cone:
    """A cone of a fan, recorded by its sorted ray indices."""

    rays: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(sorted(self.rays)))

    def __len__(self):
        return len(self.rays)

    def __contains__(self, i):
        return i in self.rays


@dataclass(frozen=True)
class Fan:
    """A fan in Z^dim: primitive rays plus simplicial maximal cones."""

    dim: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(c if isinstance(c, Cone) else Cone(tuple(c)) for c in self.max_cones)
        )

    @property
    def n_rays(self):
        return len(self.rays)

    def generators(self, cone: Cone):
        """Ray vectors of a cone, as a list of rows."""
        return [self.rays[i] for i in cone.rays]

    def with_ray_order(self, new_order) -> "Fan":
        """Reindex rays; new_order[k] is the old index now sitting at k."""
        new_order = tuple(new_order)
        if sorted(new_order) != list(range(self.n_rays)):
            raise ValueError("not a permutation of the ray indices")
        inv = {old: new for new, old in enumerate(new_order)}
        return Fan(
            self.dim,
            tuple(self.rays[o] for o in new_order),
            tuple(Cone(tuple(inv[i] for i in c.rays)) for c in self.max_cones),
        )


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations


@lru_cache(maxsize=None)
@lru_cache(maxsize=65536)
def _cone_duals(fan: Fan, cone: Cone):
    """For a full-dimensional simplicial cone: integer dual rows and |det|.

    dual[i] . generator[j] == absdet * delta_ij, so membership and facet
    normals stay in integer arithmetic.  Cached: the pairwise face checks
    revisit every cone n_cones times.
    """
    gens = fan.generators(cone)
    d = int_det(gens)
    if d == 0:
        return None
    adj = int_adjugate(gens)
    sign = 1 if d > 0 else -1
    duals = tuple(tuple(sign * adj[r][i] for r in range(len(gens))) for i in range(len(gens)))
    return duals, abs(d)


def _idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def cone_coefficients(fan: Fan, cone: Cone, v):
    """Exact coordinates of v in the cone's generators, or None if v is not
    in the cone.  Coefficients are Fractions aligned with cone.rays."""
    gens = fan.generators(cone)
    if len(gens) == fan.dim:
        duals = _cone_duals(fan, cone)
        if duals is None:
            return None
        rows, absdet = duals
        coeffs = [Fraction(_idot(r, v), absdet) for r in rows]
        return tuple(coeffs) if all(c >= 0 for c in coeffs) else None
    m = Matrix(QQ, gens).transpose()
    x = m.solve_right(v)
    if x is None or any(c < 0 for c in x):
        return None
    if m.mat_vec(x) != tuple(Fraction(t) for t in v):
        return None
    return tuple(x)


def _corrected_separator(fan: Fan, ca: Cone, cb: Cone, shared) -> bool:
    """Certify the face property with a corrected dual-sum functional.

    The candidate vanishes on the shared rays and is positive on the rest
    of ca; its positive values on cb's non-shared generators are cancelled
    exactly against cb's dual basis (which leaves the shared rays at zero).
    If the result is still strictly positive on ca's non-shared generators
    it is nonnegative on ca and nonpositive on cb, so the intersection lies
    in the shared face.
    """
    da = _cone_duals(fan, ca)
    db = _cone_duals(fan, cb)
    if da is None or db is None:
        return False
    ra, _ = da
    rb, detb = db
    u = [0] * fan.dim
    for pos, i in enumerate(ca.rays):
        if i not in shared:
            u = [a + b for a, b in zip(u, ra[pos])]
    viol = []
    for pos, j in enumerate(cb.rays):
        if j not in shared:
            w = _idot(u, fan.rays[j])
            if w > 0:
                viol.append((pos, w))
    if viol:
        u = [detb * c for c in u]
        for pos, w in viol:
            u = [a - w * b for a, b in zip(u, rb[pos])]
    if any(_idot(u, fan.rays[s]) != 0 for s in shared):
        return False
    if any(_idot(u, fan.rays[j]) > 0 for j in cb.rays):
        return False
    return all(_idot(u, fan.rays[i]) > 0 for i in ca.rays if i not in shared)


def _face_to_face(fan: Fan, ca: Cone, cb: Cone):
    """Does the pair intersect in the common face spanned by shared rays?"""
    shared = set(ca.rays) & set(cb.rays)
    # fast path: an integer functional >= 0 on ca, vanishing exactly on the
    # shared generators of ca, and <= 0 on all of cb
    for left, right in ((ca, cb), (cb, ca)):
        if len(left) != fan.dim:
            continue
        duals = _cone_duals(fan, left)
        if duals is None:
            continue
        rows, _ = duals
        u = [0] * fan.dim
        for pos, i in enumerate(left.rays):
            if i not in shared:
                u = [a + b for a, b in zip(u, rows[pos])]
        if all(_idot(u, fan.rays[j]) <= 0 for j in right.rays):
            return True
    # second fast path: start from the summed dual functional of one side
    # and cancel its violations on the other side exactly, using the other
    # side's dual basis; if the corrected functional is still strictly
    # positive on the first side's non-shared generators it certifies the
    # face property (any common point is forced into the shared face)
    if len(ca) == fan.dim and len(cb) == fan.dim:
        for left, right in ((ca, cb), (cb, ca)):
            if _corrected_separator(fan, left, right, shared):
                return True
    # exact LP fallback: simplicial coordinates are unique, so the pair
    # fails to meet in the shared face exactly when some common point puts
    # positive total weight on the non-shared generators of ca
    ga = fan.generators(ca)
    gb = fan.generators(cb)
    nonshared = [t for t, i in enumerate(ca.rays) if i not in shared]
    rows = []
    for c in range(fan.dim):
        rows.append([g[c] for g in ga] + [-g[c] for g in gb])
    rows.append([1 if s in nonshared else 0 for s in range(len(ga))] + [0] * len(gb))
    rhs = [0] * fan.dim + [1]
    return not nonneg_solution_exists(rows, rhs)


@lru_cache(maxsize=None)
def validate_fan(fan: Fan) -> ValidationReport:
    """Check the fan axioms; returns a report listing every violation."""
    v = []
    if fan.dim < 1:
        v.append("ambient dimension must be at least 1")
        return ValidationReport(tuple(v))
    for i, ray in enumerate(fan.rays):
        if len(ray) != fan.dim:
            v.append("ray %d has length %d, expected %d" % (i, len(ray), fan.dim))
            return ValidationReport(tuple(v))
        if not any(ray):
            v.append("ray %d is the zero vector" % i)
        elif ivec_primitive(ray) != ray:
            v.append("ray %d = %s is not primitive" % (i, list(ray)))
    seen = {}
    for i, ray in enumerate(fan.rays):
        if ray in seen:
            v.append("rays %d and %d are equal" % (seen[ray], i))
        else:
            seen[ray] = i
    if v:
        return ValidationReport(tuple(v))
    for k, cone in enumerate(fan.max_cones):
        if not cone.rays:
            v.append("maximal cone %d is empty" % k)
            continue
        if any(i < 0 or i >= fan.n_rays for i in cone.rays):
            v.append("maximal cone %d references a ray index out of range" % k)
            continue
        if len(set(cone.rays)) != len(cone.rays):
            v.append("maximal cone %d repeats a ray index" % k)
            continue
        gens = fan.generators(cone)
        if Matrix(QQ, gens).rank() != len(gens):
            v.append("maximal cone %d is not simplicial" % k)
    if v:
        return ValidationReport(tuple(v))
    for a, b in itertools.combinations(range(len(fan.max_cones)), 2):
        ca, cb = fan.max_cones[a], fan.max_cones[b]
        sa, sb = set(ca.rays), set(cb.rays)
        if sa == sb:
            v.append("maximal cones %d and %d are equal" % (a, b))
            continue
        if sa <= sb or sb <= sa:
            v.append("maximal cone %d is contained in maximal cone %d" % ((a, b) if sa <= sb else (b, a)))
            continue
        if not _face_to_face(fan, ca, cb):
            v.append("intersection of maximal cones %d and %d is not a face" % (a, b))
    return ValidationReport(tuple(v))


@lru_cache(maxsize=None)
def is_smooth(fan: Fan):
    """(flag, witness): whether every cone's generators extend to a lattice basis.

    A cone is smooth iff the gcd of the maximal minors of its generator
    matrix is 1 (all elementary divisors are then 1).
    """
    for cone in fan.max_cones:
        if max_minor_gcd(fan.generators(cone)) != 1:
            return False, cone
    return True, None


def _walls(fan: Fan):
    facets = {}
    for k, cone in enumerate(fan.max_cones):
        for drop in cone.rays:
            facet = tuple(sorted(set(cone.rays) - {drop}))
            facets.setdefault(facet, []).append(k)
    return facets


@lru_cache(maxsize=None)
def is_complete(fan: Fan) -> bool:
    """Wall criterion: pure dimension, every wall on exactly two maximal
    cones, and a connected wall graph.  Valid for validated simplicial fans."""
    if not fan.max_cones:
        return False
    if any(len(c) != fan.dim for c in fan.max_cones):
        return False
    facets = _walls(fan)
    adjacency = {k: [] for k in range(len(fan.max_cones))}
    for facet, owners in facets.items():
        if len(owners) != 2:
            return False
        adjacency[owners[0]].append(owners[1])
        adjacency[owners[1]].append(owners[0])
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for j in adjacency[k]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(fan.max_cones)


@lru_cache(maxsize=None)
def is_projective(fan: Fan):
    """(flag, witness): strictly convex piecewise linear support function.

    Searches for ray values a_i with, at every wall, the linear extension
    from one side strictly exceeding the value on the opposite ray.  The
    strictness margin is maximized by an exact LP; the fan is projective
    iff the margin is positive.  Witness is an integer value tuple.
    """
    if not is_complete(fan):
        raise ValueError("projectivity test requires a complete fan")
    walls = []
    for facet, owners in _walls(fan).items():
        sigma = fan.max_cones[owners[0]]
        tau = fan.max_cones[owners[1]]
        opp = next(i for i in tau.rays if i not in facet)
        rows, absdet = _cone_duals(fan, sigma)
        coeffs = [Fraction(_idot(r, fan.rays[opp]), absdet) for r in rows]
        walls.append((sigma.rays, coeffs, opp))
    n = fan.n_rays
    # variables: p_i, q_i (a_i = p_i - q_i), t, one slack per wall, s0
    nvars = 2 * n + 1 + len(walls) + 1
    rows, rhs = [], []
    for w, (sigma_rays, coeffs, opp) in enumerate(walls):
        row = [Fraction(0)] * nvars
        for pos, i in enumerate(sigma_rays):
            row[i] += coeffs[pos]
            row[n + i] -= coeffs[pos]
        row[opp] -= 1
        row[n + opp] += 1
        row[2 * n] = Fraction(-1)
        row[2 * n + 1 + w] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    bound = [Fraction(0)] * nvars
    bound[2 * n] = Fraction(1)
    bound[-1] = Fraction(1)
    rows.append(bound)
    rhs.append(Fraction(1))
    cost = [Fraction(0)] * nvars
    cost[2 * n] = Fraction(-1)
    status, x, val = simplex_solve(rows, rhs, cost)
    if status != "optimal" or val == 0:
        return False, None
    a = [x[i] - x[n + i] for i in range(n)]
    denom = 1
    for c in a:
        denom = denom * c.denominator // _gcd(denom, c.denominator)
    witness = tuple(int(c * denom) for c in a)
    for sigma_rays, coeffs, opp in walls:
        lhs = sum(c * witness[i] for c, i in zip(coeffs, sigma_rays))
        if not lhs > witness[opp]:
            raise RuntimeError("support function witness failed re-verification")
    return True, witness


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def minimal_containing_cone(fan: Fan, v):
    """The unique minimal cone containing v, with positive coefficients.

    Returns (Cone, coeffs) where coeffs are the nonzero generator
    coefficients aligned with the returned cone's rays.  Raises ValueError
    for the zero vector or a vector outside the support.
    """
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("the zero vector lies in every cone; no minimal cone is defined")
    for cone in fan.max_cones:
        coeffs = cone_coefficients(fan, cone, v)
        if coeffs is not None:
            support = [(i, c) for i, c in zip(cone.rays, coeffs) if c != 0]
            return Cone(tuple(i for i, _ in support)), tuple(c for _, c in support)
    raise ValueError("vector %s lies outside the support of the fan" % (list(v),))


def is_smooth_star_point(fan: Fan, v) -> bool:
    """Is v the sum of the generators of the minimal cone containing it?"""
    v = tuple(int(x) for x in v)
    if not any(v) or ivec_primitive(v) != v or v in fan.rays:
        return False
    try:
        _, coeffs = minimal_containing_cone(fan, v)
    except ValueError:
        return False
    return all(c == 1 for c in coeffs)


def stellar_subdivide(fan: Fan, v) -> Fan:
    """Subdivide along the ray through v (the toric blowup of V(sigma_v))."""
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("cannot subdivide along the zero vector")
    if ivec_primitive(v) != v:
        raise ValueError("subdivision vector %s is not primitive" % (list(v),))
    if v in fan.rays:
        raise ValueError("vector %s is already a ray of the fan" % (list(v),))
    center, _ = minimal_containing_cone(fan, v)
    new_idx = fan.n_rays
    new_cones = []
    center_set = set(center.rays)
    for cone in fan.max_cones:
        if center_set <= set(cone.rays):
            for j in center.rays:
                new_cones.append(Cone(tuple((set(cone.rays) - {j}) | {new_idx})))
        else:
            new_cones.append(cone)
    out = Fan(fan.dim, fan.rays + (v,), tuple(new_cones))
    report = validate_fan(out)
    if not report.ok:
        raise RuntimeError("stellar subdivision produced an invalid fan: %s" % (report.violations,))
    return out


def barycentric_subdivision(fan: Fan) -> Fan:
    """Replace each maximal cone by the d! cones on its subset-sum rays."""
    ray_index = {}
    rays = []

    def ray_of(subset):
        vec = tuple(sum(fan.rays[i][c] for i in subset) for c in range(fan.dim))
        vec = ivec_primitive(vec)
        if vec not in ray_index:
            ray_index[vec] = len(rays)
            rays.append(vec)
        return ray_index[vec]

    for cone in fan.max_cones:
        for size in range(1, len(cone) + 1):
            for subset in itertools.combinations(cone.rays, size):
                ray_of(subset)
    cones = []
    seen = set()
    for cone in fan.max_cones:
        for perm in itertools.permutations(cone.rays):
            chain = tuple(ray_of(tuple(sorted(perm[: k + 1]))) for k in range(len(perm)))
            c = Cone(chain)
            if c.rays not in seen:
                seen.add(c.rays)
                cones.append(c)
    out = Fan(fan.dim, tuple(rays), tuple(cones))
    report = validate_fan(out)
    if not report.ok:
        raise RuntimeError("barycentric subdivision produced an invalid fan: %s" % (report.violations,))
    return out


def extend_with_apexes(fan: Fan) -> Fan:
    """One dimension up: embed with last coordinate 0 and join every maximal
    cone with each of the two apex rays (1,...,1, 1) and (1,...,1,-1).

    Preserves smoothness and completeness; both are re-checked on the output.
    """
    smooth, witness = is_smooth(fan)
    if not smooth:
        raise ValueError("extension requires a smooth fan; cone %s is singular" % (witness,))
    if not is_complete(fan):
        raise ValueError("extension requires a complete fan")
    d = fan.dim
    rays = tuple(r + (0,) for r in fan.rays) + ((1,) * (d + 1), (1,) * d + (-1,))
    up, down = fan.n_rays, fan.n_rays + 1
    cones = []
    for cone in fan.max_cones:
        cones.append(Cone(cone.rays + (up,)))
        cones.append(Cone(cone.rays + (down,)))
    out = Fan(d + 1, rays, tuple(cones))
    report = validate_fan(out)
    if not report.ok:
        raise RuntimeError("apex extension produced an invalid fan: %s" % (report.violations,))
    if not is_smooth(out)[0] or not is_complete(out):
        raise RuntimeError("apex extension failed to preserve smoothness or completeness")
    return out


def fans_equal_up_to_ray_order(f1: Fan, f2: Fan) -> bool:
    """Same rays as a set and same cones under the induced ray matching."""
    if f1.dim != f2.dim or f1.n_rays != f2.n_rays:
        return False
    if set(f1.rays) != set(f2.rays):
        return False
    to2 = {i: f2.rays.index(r) for i, r in enumerate(f1.rays)}
    cones1 = {tuple(sorted(to2[i] for i in c.rays)) for c in f1.max_cones}
    cones2 = {c.rays for c in f2.max_cones}
    return cones1 == cones2


# ----------------------------------------------------------------------
# builders


def projective_space_fan(d: int) -> Fan:
    """The fan of P^d: rays e_1..e_d and -(e_1+...+e_d), all d-subsets."""
    if d < 1:
        raise ValueError("dimension must be positive")
    rays = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    rays.append(tuple(-1 for _ in range(d)))
    cones = [Cone(c) for c in itertools.combinations(range(d + 1), d)]
    return Fan(d, tuple(rays), tuple(cones))


def product_p1_fan(d: int) -> Fan:
    """The fan of (P^1)^d: rays +-e_i, one maximal cone per sign pattern."""
    if d < 1:
        raise ValueError("dimension must be positive")
    rays = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    rays += [tuple(-1 if j == i else 0 for j in range(d)) for i in range(d)]
    cones = []
    for signs in itertools.product((0, 1), repeat=d):
        cones.append(Cone(tuple(i + d * s for i, s in enumerate(signs))))
    return Fan(d, tuple(rays), tuple(cones))


def p1p1_iterated_blowup_fan() -> Fan:
    """P1 x P1 blown up at one fixed point, then both new fixed points on the
    exceptional curve, then all four fixed points on the two newest ones.

    Eleven rays; reordered so the nine rays in the closed positive quadrant
    come first and (-1,0), (0,-1) sit at indices 9 and 10.
    """
    fan = product_p1_fan(2)
    for v in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 3), (3, 2), (3, 1)]:
        fan = stellar_subdivide(fan, v)
    positive = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (2, 3), (3, 2), (3, 1)]
    order = [fan.rays.index(r) for r in positive] + [fan.rays.index((-1, 0)), fan.rays.index((0, -1))]
    return fan.with_ray_order(order)


@dataclass(frozen=True)
class StarStep:
    """Certificate for one stellar subdivision at a smooth star point."""

    vector: tuple
    cone: Cone
    coeffs: tuple


TOTARO_SUBDIVISION_VECTORS = (
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


def totaro_fan_sequence():
    """The chain of ten stellar subdivisions of a P^3 fan whose rays all end
    up, projectivized, on the 3x3 grid configuration in the plane.

    Returns (fans, steps): eleven fans (the P^3 fan plus one per
    subdivision) and a StarStep certificate per subdivision.
    """
    base = Fan(
        3,
        ((0, 0, 1), (0, 1, 0), (1, 1, 1), (-1, -2, -2)),
        tuple(Cone(c) for c in itertools.combinations(range(4), 3)),
    )
    fans = [base]
    steps = []
    for v in TOTARO_SUBDIVISION_VECTORS:
        fan = fans[-1]
        cone, coeffs = minimal_containing_cone(fan, v)
        if any(c != 1 for c in coeffs):
            raise RuntimeError("subdivision vector %s is not a smooth star point" % (v,))
        steps.append(StarStep(v, cone, coeffs))
        fans.append(stellar_subdivide(fan, v))
    return fans, tuple(steps)


def totaro_threefold_fan() -> Fan:
    """The final 14-ray fan of the subdivision chain."""
    return totaro_fan_sequence()[0][-1]
