"""Effective-cone bookkeeping for projectivized bundles.

The divisor class group of the projectivization is relabeled onto the
class group of the blowup of the fiber projective space; torus-orbit
closures of fiber hypersurfaces acquire divisor classes through exact
multiplicity computations; and the pseudoeffective cone's failure to be
polyhedral is evidenced by breadth-first enumeration of (-1)-classes
under the Cremona action.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .arrangement import from_bundle
from .citations import CITATIONS
from .coxring import ClassGroup, DivisorClass, class_group_projectivization
from .fan import Cone, cone_coefficients
from .klyachko import ToricVectorBundle, _monomials
from .linalg import Matrix


# ----------------------------------------------------------------------
# homogeneous forms on the fiber


@dataclass(frozen=True)
class HomogeneousForm:
    """Dense coefficient vector in the lex monomial basis of one degree."""

    field: object
    rank: int
    degree: int
    coeffs: tuple

    def __post_init__(self):
        expected = math.comb(self.rank - 1 + self.degree, self.degree)
        if len(self.coeffs) != expected:
            raise ValueError(
                "degree-%d form in %d variables needs %d coefficients, got %d"
                % (self.degree, self.rank, expected, len(self.coeffs))
            )

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def monomials(self):
        return _monomials(self.rank, self.degree)

    def evaluate(self, point):
        pt = [self.field.of(c) for c in point]
        total = self.field.zero
        for c, expo in zip(self.coeffs, self.monomials()):
            if not c:
                continue
            term = c
            for x, e in zip(pt, expo):
                for _ in range(e):
                    term = term * x
            total = total + term
        return total


def homogeneous_form(field, rank, degree, coeffs) -> HomogeneousForm:
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return HomogeneousForm(field, rank, degree, tuple(field.of(c) for c in coeffs))


def linear_form(field, functional) -> HomogeneousForm:
    """The degree-1 form with the given coefficients, one per variable."""
    return homogeneous_form(field, len(functional), 1, list(functional))


def form_product(a: HomogeneousForm, b: HomogeneousForm) -> HomogeneousForm:
    if a.rank != b.rank or a.field.char != b.field.char:
        raise ValueError("forms live in different polynomial rings")
    field = a.field
    out = {}
    for ca, ea in zip(a.coeffs, a.monomials()):
        if not ca:
            continue
        for cb, eb in zip(b.coeffs, b.monomials()):
            if not cb:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            prev = out.get(key)
            out[key] = ca * cb if prev is None else prev + ca * cb
    degree = a.degree + b.degree
    coeffs = [out.get(e, field.zero) for e in _monomials(a.rank, degree)]
    return HomogeneousForm(field, a.rank, degree, tuple(coeffs))


# ----------------------------------------------------------------------
# multiplicities and orbit-closure classes


def _poly_mul_linear(poly, lin, field):
    out = {}
    for expo, c in poly.items():
        for j, a in enumerate(lin):
            if not a:
                continue
            e2 = list(expo)
            e2[j] += 1
            e2 = tuple(e2)
            prev = out.get(e2)
            out[e2] = c * a if prev is None else prev + c * a
    return out


def _basis_through(field, point):
    """Columns of an invertible matrix whose first column is the point."""
    r = len(point)
    cols = [list(point)]
    for k in range(r):
        unit = [field.of(1) if i == k else field.of(0) for i in range(r)]
        trial = cols + [unit]
        if Matrix(field, trial).rank() == len(trial):
            cols.append(unit)
        if len(cols) == r:
            break
    return cols


def multiplicity_at(form: HomogeneousForm, point) -> int:
    """Vanishing order of the hypersurface at a projective point.

    The point is moved to (1, 0, ..., 0) by an exact invertible linear
    substitution and the form is dehomogenized there: the multiplicity is
    the lowest total degree in the remaining variables carrying a nonzero
    coefficient.  No derivatives are taken, so the answer is correct in
    every characteristic.
    """
    if form.is_zero():
        raise ValueError("the zero form has no multiplicity")
    field = form.field
    pt = [field.of(c) for c in point]
    if len(pt) != form.rank:
        raise ValueError("point has %d coordinates, form has rank %d" % (len(pt), form.rank))
    if not any(pt):
        raise ValueError("a projective point needs a nonzero coordinate")
    cols = _basis_through(field, pt)
    # substitution x_i = sum_j M[i][j] y_j sends y = e_1 to x = point
    rows = [[cols[j][i] for j in range(form.rank)] for i in range(form.rank)]
    total = {}
    for c, expo in zip(form.coeffs, form.monomials()):
        if not c:
            continue
        term = {(0,) * form.rank: c}
        for i, e in enumerate(expo):
            for _ in range(e):
                term = _poly_mul_linear(term, rows[i], field)
        for key, val in term.items():
            prev = total.get(key)
            total[key] = val if prev is None else prev + val
    degrees = [form.degree - key[0] for key, val in total.items() if val]
    if not degrees:
        raise RuntimeError("nonzero form vanished under an invertible substitution")
    return min(degrees)


def orbit_closure_class(form: HomogeneousForm, bundle: ToricVectorBundle) -> DivisorClass:
    """Divisor class of the torus-orbit closure of a fiber hypersurface.

    The class is m O(1) minus, for every ray carrying a nonzero subspace,
    the multiplicity of the hypersurface at that ray's point center times
    the pullback divisor.  Rays whose centers are not points are outside
    the scope of the multiplicity statement and are refused.
    """
    if form.is_zero():
        raise ValueError("a hypersurface needs a nonzero defining form")
    if not bundle.is_normalized():
        raise ValueError("orbit classes require shift-normalized filtrations; call normalized() first")
    if form.rank != bundle.rank:
        raise ValueError("form rank %d does not match bundle rank %d" % (form.rank, bundle.rank))
    if form.field.char != bundle.field.char:
        raise ValueError("form and bundle use different coefficient fields")
    group = class_group_projectivization(bundle)
    arr = from_bundle(bundle)
    out = group.o1().scaled(form.degree)
    for member in arr.members:
        if not member.is_point:
            raise ValueError(
                "multiplicities are taken at point centers only; rays %s carry a "
                "center of dimension %d"
                % (tuple(i + 1 for i in member.provenance), member.locus_dim)
            )
        mult = multiplicity_at(form, member.point_coordinates())
        if mult:
            for ray in member.provenance:
                out = out - group.ray_divisor(ray).scaled(mult)
    return out


# ----------------------------------------------------------------------
# the relabeling onto the blowup class group


@dataclass(frozen=True)
class BlowupClassGroup:
    """Free class group of a blowup of projective space: L and one E per center."""

    names: tuple

    @property
    def rank(self) -> int:
        return len(self.names)

    def zero(self) -> DivisorClass:
        return DivisorClass(self.names, (0,) * self.rank)

    def line(self) -> DivisorClass:
        return self.unit("L")

    def exceptional(self, k: int) -> DivisorClass:
        """E_k, 1-based."""
        return self.unit("E_%d" % k)

    def unit(self, name: str) -> DivisorClass:
        pos = self.names.index(name)
        return DivisorClass(self.names, tuple(1 if i == pos else 0 for i in range(self.rank)))

    def of_curve(self, curve: "CurveClass") -> DivisorClass:
        if len(curve.multiplicities) != self.rank - 1:
            raise ValueError(
                "curve has %d multiplicities, group has %d centers"
                % (len(curve.multiplicities), self.rank - 1)
            )
        return DivisorClass(self.names, (curve.degree,) + tuple(-m for m in curve.multiplicities))


@dataclass(frozen=True)
class PhiStar:
    """Relabeling isomorphism from the blowup class group to the projectivization.

    L goes to O(1) and each exceptional class to the pullback divisor over
    the ray carrying the corresponding center.  The map is injective on the
    listed basis; it is onto exactly when the zero rays are used up by the
    eliminated maximal cone.
    """

    blowup: BlowupClassGroup
    target: ClassGroup
    center_rays: tuple

    @property
    def is_isomorphism(self) -> bool:
        return self.blowup.rank == self.target.rank

    def apply(self, c: DivisorClass) -> DivisorClass:
        if c.basis != self.blowup.names:
            raise ValueError("divisor class does not live in the blowup class group")
        out = self.target.o1().scaled(c.coords[0])
        for ray, coeff in zip(self.center_rays, c.coords[1:]):
            if coeff:
                out = out + self.target.ray_divisor(ray).scaled(coeff)
        return out


def phi_star_map(bundle: ToricVectorBundle) -> PhiStar:
    b = bundle if bundle.is_normalized() else bundle.normalized()
    group = class_group_projectivization(b)
    if not group.phi_star_available:
        raise ValueError("the relabeling needs a maximal cone whose rays all carry zero subspaces")
    members = from_bundle(b).members
    for m in members:
        if len(m.provenance) > 1:
            raise ValueError(
                "rays %s carry the same subspace: the quotient is nonseparated and "
                "the center relabeling is not defined" % (tuple(i + 1 for i in m.provenance),)
            )
    names = ("L",) + tuple("E_%d" % (k + 1) for k in range(len(members)))
    center_rays = tuple(m.provenance[0] for m in members)
    return PhiStar(BlowupClassGroup(names), group, center_rays)


def phi_star(bundle: ToricVectorBundle, c: DivisorClass) -> DivisorClass:
    """One-shot relabeling of a blowup divisor class."""
    return phi_star_map(bundle).apply(c)


# ----------------------------------------------------------------------
# effective-cone generators


@dataclass(frozen=True)
class EffectiveGenerator:
    divisor_class: DivisorClass
    provenance: str


def effective_generators(bundle: ToricVectorBundle, supplied=()) -> tuple:
    """Generator set for the pseudoeffective cone of the projectivization.

    Relabels the supplied effective classes of the blowup and adds the
    pullback divisors over the zero-subspace rays.  Supplied items may be
    divisor classes in the blowup basis, curve classes (d; m_1..m_s), or
    homogeneous forms (taken to their orbit-closure classes).  The output
    is deduplicated and tagged; no extremality is claimed.
    """
    b = bundle if bundle.is_normalized() else bundle.normalized()
    phi = phi_star_map(b)
    group = phi.target
    out = []
    seen = set()

    def push(cls, provenance):
        if cls.coords not in seen:
            seen.add(cls.coords)
            out.append(EffectiveGenerator(cls, provenance))

    for item in supplied:
        if isinstance(item, HomogeneousForm):
            push(
                orbit_closure_class(item, b),
                "orbit closure of a degree-%d hypersurface" % item.degree,
            )
        elif isinstance(item, CurveClass):
            push(
                phi.apply(phi.blowup.of_curve(item)),
                "relabeled curve class (%d; %s)"
                % (item.degree, ", ".join(str(m) for m in item.multiplicities)),
            )
        elif isinstance(item, DivisorClass):
            push(phi.apply(item), "relabeled %s" % item.render())
        else:
            raise TypeError("cannot interpret %r as an effective class" % (item,))
    arr = from_bundle(b)
    for i in arr.zero_rays:
        push(group.ray_divisor(i), "zero-subspace ray %d" % (i + 1))
    return tuple(out)


# ----------------------------------------------------------------------
# (-1)-classes under the Cremona action


@dataclass(frozen=True)
class CurveClass:
    """Class d L - sum m_i E_i on a blowup of the projective plane."""

    degree: int
    multiplicities: tuple

    @property
    def self_intersection(self) -> int:
        return self.degree**2 - sum(m * m for m in self.multiplicities)

    @property
    def anticanonical_degree(self) -> int:
        return 3 * self.degree - sum(self.multiplicities)

    @property
    def is_minus_one(self) -> bool:
        return self.self_intersection == -1 and self.anticanonical_degree == 1

    def canonical(self) -> "CurveClass":
        return CurveClass(self.degree, tuple(sorted(self.multiplicities, reverse=True)))

    def as_row(self) -> tuple:
        return (self.degree,) + self.multiplicities


def cremona_move(c: CurveClass, i: int, j: int, k: int) -> CurveClass:
    """The standard quadratic transform centered at three of the points.

    Applying the move twice with the same triple returns the input.
    """
    if len({i, j, k}) != 3:
        raise ValueError("the move needs three distinct indices")
    m = c.multiplicities
    t = c.degree - m[i] - m[j] - m[k]
    new = list(m)
    for pos in (i, j, k):
        new[pos] += t
    return CurveClass(c.degree + t, tuple(new))


@dataclass(frozen=True)
class MinusOneEnumeration:
    s: int
    depth: int
    levels: tuple

    @property
    def classes(self) -> tuple:
        return tuple(c for level in self.levels for c in level)

    @property
    def level_max_degrees(self) -> tuple:
        return tuple(max(c.degree for c in level) for level in self.levels if level)

    def to_matrix(self) -> tuple:
        """Integer rows (d, m_1, ..., m_s), one per class."""
        return tuple(c.as_row() for c in self.classes)


def minus_one_classes(s: int, depth: int, max_degree=None) -> MinusOneEnumeration:
    """Breadth-first Cremona closure of the exceptional and line seeds.

    Classes are kept in canonical form (multiplicities sorted in
    decreasing order), so coordinate permutations are implicit.  Every
    emitted class is verified against both Diophantine identities.
    """
    if s < 3:
        raise ValueError("the Cremona move needs at least three centers")
    if depth < 0:
        raise ValueError("depth must be nonnegative")

    def admit(c):
        if not c.is_minus_one:
            raise RuntimeError(
                "enumeration produced a class violating the (-1) identities: %s" % (c.as_row(),)
            )
        return c

    seeds = {
        admit(CurveClass(0, tuple(sorted((-1,) + (0,) * (s - 1), reverse=True)))),
        admit(CurveClass(1, tuple(sorted((1, 1) + (0,) * (s - 2), reverse=True)))),
    }
    order = lambda c: (c.degree, c.multiplicities)
    levels = [tuple(sorted(seeds, key=order))]
    seen = set(levels[0])
    for _ in range(depth):
        frontier = set()
        for c in levels[-1]:
            for i, j, k in itertools.combinations(range(s), 3):
                n = cremona_move(c, i, j, k).canonical()
                if n in seen or n in frontier:
                    continue
                if max_degree is not None and n.degree > max_degree:
                    continue
                frontier.add(admit(n))
        if not frontier:
            break
        seen |= frontier
        levels.append(tuple(sorted(frontier, key=order)))
    return MinusOneEnumeration(s, depth, tuple(levels))


# ----------------------------------------------------------------------
# non-polyhedrality evidence


@dataclass(frozen=True)
class NonpolyhedralityReport:
    rank: int
    s_count: int
    ray_hypothesis_holds: bool
    rays_outside: tuple
    threshold_text: str
    threshold_holds: bool
    hypotheses_met: bool
    regime_supported: bool
    class_count: int
    level_max_degrees: tuple
    degrees_strictly_increase: bool
    sample_classes: tuple
    citations: tuple
    notes: tuple
    enumeration: object

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "point_count": self.s_count,
            "ray_hypothesis_holds": self.ray_hypothesis_holds,
            "rays_outside_sigma_pair": [i + 1 for i in self.rays_outside],
            "threshold": self.threshold_text,
            "threshold_holds": self.threshold_holds,
            "hypotheses_met": self.hypotheses_met,
            "regime_supported": self.regime_supported,
            "class_count": self.class_count,
            "level_max_degrees": list(self.level_max_degrees),
            "degrees_strictly_increase": self.degrees_strictly_increase,
            "sample_classes": list(self.sample_classes),
            "citations": list(self.citations),
            "notes": list(self.notes),
        }


def nonpolyhedrality_report(bundle: ToricVectorBundle, depth: int = 5) -> NonpolyhedralityReport:
    """Evidence that the pseudoeffective cone is not polyhedral.

    Checks the fan hypothesis (every ray inside the chosen zero cone or its
    negative) and the exact threshold 1/r + 1/(n-d-r) <= 1/2; in the plane
    regime (rank 3, nine point centers) enumerates (-1)-classes and maps
    them through the relabeling.  The conclusion is evidence only, and
    conditional on very-generality of the centers.
    """
    b = bundle if bundle.is_normalized() else bundle.normalized()
    group = class_group_projectivization(b)
    fan = b.fan
    notes = []
    rays_outside = ()
    ray_ok = False
    if not group.phi_star_available:
        notes.append("no maximal cone carries only zero subspaces; the relabeling is unavailable")
    else:
        sigma = Cone(group.sigma0)
        bad = []
        for i, v in enumerate(fan.rays):
            inside = cone_coefficients(fan, sigma, list(v)) is not None
            negated = cone_coefficients(fan, sigma, [-c for c in v]) is not None
            if not (inside or negated):
                bad.append(i)
        rays_outside = tuple(bad)
        ray_ok = not bad
        if bad:
            notes.append(
                "rays %s lie in neither the zero cone nor its negative"
                % (tuple(i + 1 for i in bad),)
            )
    arr = from_bundle(b)
    members = arr.s_members()
    r = b.rank
    # the count matching the paper regime is the rays carrying a nonzero
    # subspace: the eliminated cone accounts for the rest
    nonzero = fan.n_rays - len(arr.zero_rays)
    denom = nonzero - r
    if denom >= 1:
        value = Fraction(1, r) + Fraction(1, denom)
        threshold_ok = value <= Fraction(1, 2)
        threshold_text = "1/%d + 1/%d = %s" % (r, denom, value)
        if not threshold_ok:
            notes.append("threshold fails: %s > 1/2" % (threshold_text,))
    else:
        threshold_ok = False
        threshold_text = "1/%d + 1/(%d - %d) undefined" % (r, nonzero, r)
        notes.append(
            "needs more nonzero-subspace rays than the rank: %d <= %d" % (nonzero, r)
        )
    hypotheses_met = ray_ok and threshold_ok
    plane_regime = (
        hypotheses_met
        and r == 3
        and len(members) == 9
        and len(arr.members) == len(members)
        and all(m.is_point for m in members)
        and all(len(m.provenance) == 1 for m in members)
    )
    class_count = 0
    level_max = ()
    increasing = False
    samples = ()
    enum = None
    cites = ()
    if plane_regime:
        enum = minus_one_classes(9, depth)
        phi = phi_star_map(b)
        class_count = len(enum.classes)
        level_max = enum.level_max_degrees
        increasing = all(a < b2 for a, b2 in zip(level_max, level_max[1:]))
        samples = tuple(
            phi.apply(phi.blowup.of_curve(c)).render() for c in enum.classes[:6]
        )
        cites = ("non-polyhedral-blowup", "effective-cone-generators")
        for cid in cites:
            assert cid in CITATIONS
        notes.append(
            "the growing family of (-1)-classes is evidence only, conditional on "
            "very-generality of the nine centers"
        )
    elif hypotheses_met:
        notes.append(
            "hypotheses hold but the enumeration regime is rank 3 with nine point "
            "centers; only the checks are reported"
        )
    return NonpolyhedralityReport(
        r,
        len(members),
        ray_ok,
        rays_outside,
        threshold_text,
        threshold_ok,
        hypotheses_met,
        plane_regime,
        class_count,
        level_max,
        increasing,
        samples,
        cites,
        tuple(notes),
        enum,
    )
