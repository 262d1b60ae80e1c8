"""Filtration data for toric vector bundles and their compatibility.

A bundle is recorded by one decreasing fiber filtration per ray, restricted
to the shape used throughout this package: full space up to a shift, then a
single proper subspace for `step` levels, then zero.  Compatibility over a
smooth fan reduces, cone by cone, to finding a basis of the fiber adapted
to the cone's subspaces; the certificate stores the basis lines together
with integer characters and is always re-verified against the definition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .fan import Cone, Fan, fans_equal_up_to_ray_order, is_smooth, projective_space_fan, stellar_subdivide, validate_fan
from .linalg import Field, Matrix, QQ, Subspace, int_solve, ivec_primitive


@dataclass(frozen=True)
class RayFiltration:
    """One ray's filtration: full for k <= shift, `subspace` for the next
    `step` levels, zero beyond.  The subspace must be proper (possibly 0)."""

    subspace: Subspace
    step: int = 1
    shift: int = 0

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("step length must be a positive integer")
        if self.subspace.dim == self.subspace.ambient:
            raise ValueError("the full space is not allowed as a filtration subspace; use a shift instead")

    def value(self, k: int) -> Subspace:
        if k <= self.shift:
            return Subspace.full(self.subspace.field, self.subspace.ambient)
        if k <= self.shift + self.step:
            return self.subspace
        return Subspace.zero(self.subspace.field, self.subspace.ambient)

    def normalized(self) -> "RayFiltration":
        return RayFiltration(self.subspace, self.step, 0)


@dataclass(frozen=True)
class ToricVectorBundle:
    fan: Fan
    rank: int
    field: Field
    filtrations: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(self.filtrations) != self.fan.n_rays:
            raise ValueError(
                "expected %d filtrations, got %d" % (self.fan.n_rays, len(self.filtrations))
            )
        for f in self.filtrations:
            if f.subspace.ambient != self.rank:
                raise ValueError("filtration subspace lives in dimension %d, not the rank %d" % (f.subspace.ambient, self.rank))
            if f.subspace.field.char != self.field.char:
                raise ValueError("filtration field does not match the bundle field")

    def filtration_value(self, ray_index: int, k: int) -> Subspace:
        return self.filtrations[ray_index].value(k)

    def is_normalized(self) -> bool:
        return all(f.shift == 0 for f in self.filtrations)

    def normalized(self) -> "ToricVectorBundle":
        return ToricVectorBundle(self.fan, self.rank, self.field, tuple(f.normalized() for f in self.filtrations))


def standard_bundle(fan: Fan, rank: int, subspaces, steps=None, field=None, shifts=None) -> ToricVectorBundle:
    """Bundle from per-ray proper subspaces (None meaning zero) and steps.

    Subspace dimensions must be < rank; repetitions among the nonzero
    subspaces are allowed and are handled by the presentation layer.
    """
    if field is None:
        field = next((s.field for s in subspaces if s is not None), QQ)
    if steps is None:
        steps = [1] * fan.n_rays
    if shifts is None:
        shifts = [0] * fan.n_rays
    if not (len(subspaces) == len(steps) == len(shifts) == fan.n_rays):
        raise ValueError("expected one subspace, step, and shift per ray")
    filtrations = []
    for s, a, sh in zip(subspaces, steps, shifts):
        if s is None:
            s = Subspace.zero(field, rank)
        if s.dim >= rank:
            raise ValueError("filtration subspace must have dimension < rank")
        filtrations.append(RayFiltration(s, int(a), int(sh)))
    return ToricVectorBundle(fan, rank, field, tuple(filtrations))


def cotangent_bundle(fan: Fan, characteristic: int = 0) -> ToricVectorBundle:
    """Rank-d bundle whose subspace at a ray is the perp of its generator.

    Recorded with shift -1; call .normalized() for the twist that puts the
    filtrations in shift-0 shape.  Coinciding perps (opposite rays, or
    accidental coincidences in positive characteristic) are permitted here
    and reported by filtration_coincidences.
    """
    if not is_smooth(fan)[0]:
        raise ValueError("cotangent filtrations require a smooth fan")
    field = Field(characteristic)
    filtrations = []
    for v in fan.rays:
        perp = Matrix(field, [list(v)]).kernel_basis()
        sub = Subspace(field, fan.dim, tuple(perp))
        filtrations.append(RayFiltration(sub, 1, -1))
    return ToricVectorBundle(fan, fan.dim, field, tuple(filtrations))


def tangent_bundle(fan: Fan, characteristic: int = 0) -> ToricVectorBundle:
    """Rank-d bundle with the line through each ray generator as subspace.

    On a one-dimensional fan the line is the whole fiber; that degenerate
    layer is expressed as a shift, keeping the filtration shape canonical.
    """
    if not is_smooth(fan)[0]:
        raise ValueError("tangent filtrations require a smooth fan")
    field = Field(characteristic)
    filtrations = []
    for v in fan.rays:
        sub = Subspace.span(field, fan.dim, [list(v)])
        if sub.dim == fan.dim:
            filtrations.append(RayFiltration(Subspace.zero(field, fan.dim), 1, 1))
        else:
            filtrations.append(RayFiltration(sub, 1, 0))
    return ToricVectorBundle(fan, fan.dim, field, tuple(filtrations))


def filtration_coincidences(bundle: ToricVectorBundle):
    """Pairs (i, j), i < j, of rays carrying the same nonzero subspace."""
    pairs = []
    for i, j in itertools.combinations(range(bundle.fan.n_rays), 2):
        si = bundle.filtrations[i].subspace
        sj = bundle.filtrations[j].subspace
        if not si.is_zero() and si == sj:
            pairs.append((i, j))
    return tuple(pairs)


# ----------------------------------------------------------------------
# compatibility


@dataclass(frozen=True)
class ConeCertificate:
    cone: Cone
    lines: tuple
    characters: tuple


@dataclass(frozen=True)
class FailureWitness:
    cone: Cone
    reason: str


@dataclass(frozen=True)
class CompatibilityResult:
    compatible: bool
    certificates: tuple
    failure: object = None


def _extend_by(chosen, rows, field, rank_cap):
    """Append rows that increase the rank of `chosen`, in the given order."""
    for row in rows:
        if len(chosen) == rank_cap:
            return
        if Matrix(field, list(chosen) + [list(row)]).rank() > len(chosen):
            chosen.append(tuple(row))


def _adapted_basis_two(subs, rank, field):
    """Adapted basis for at most two subspaces: intersection first, then
    each subspace, then coordinate vectors.  Always succeeds."""
    s1 = subs[0] if subs else Subspace.zero(field, rank)
    s2 = subs[1] if len(subs) > 1 else Subspace.zero(field, rank)
    chosen = []
    _extend_by(chosen, s1.intersect(s2).basis, field, rank)
    _extend_by(chosen, s1.basis, field, rank)
    _extend_by(chosen, s2.basis, field, rank)
    identity = [[field.one if i == j else field.zero for j in range(rank)] for i in range(rank)]
    _extend_by(chosen, identity, field, rank)
    return tuple(chosen)


def _adapted_basis_hyperplanes(subs, rank, field):
    """Distinct hyperplanes: adapted basis exists iff the stacked normals
    have full rank; built from near-dual vectors plus the common kernel."""
    normals = []
    for s in subs:
        ann = s.annihilator()
        normals.append(ann.basis[0])
    n = Matrix(field, [list(v) for v in normals])
    if n.rank() < len(subs):
        return None
    chosen = []
    for i in range(len(subs)):
        e = [field.one if j == i else field.zero for j in range(len(subs))]
        w = n.solve_right(e)
        chosen.append(tuple(w))
    for row in Matrix(field, [list(v) for v in normals]).kernel_basis():
        chosen.append(tuple(row))
    return tuple(chosen)


def _candidate_vectors(basis_rows, field):
    """Deterministic stream of nonzero vectors in the span of basis_rows."""
    k = len(basis_rows)
    if k == 0:
        return
    if field.char:
        pools = [list(range(field.char))] * k
        for coeffs in itertools.product(*pools):
            if not any(coeffs):
                continue
            yield tuple(
                sum((field.of(c) * x for c, x in zip(coeffs, col)), field.zero)
                for col in zip(*basis_rows)
            )
    else:
        for height in range(1, 5):
            for coeffs in itertools.product(range(-height, height + 1), repeat=k):
                if max(abs(c) for c in coeffs) != height:
                    continue
                yield tuple(
                    sum((field.of(c) * x for c, x in zip(coeffs, col)), field.zero)
                    for col in zip(*basis_rows)
                )


def _adapted_basis_general(subs, rank, field):
    """Adapted basis for an arbitrary family of proper subspaces.

    Counts how many basis vectors must lie in each intersection pattern
    (inclusion-exclusion over the intersection lattice); a negative count
    rules a basis out.  Vectors are then chosen greedily, most special
    patterns first, each new vector staying independent of the previous
    ones and out of every subspace its pattern excludes.
    """
    d = len(subs)
    index_sets = []
    for size in range(d, -1, -1):
        index_sets.extend(itertools.combinations(range(d), size))
    inter = {}
    for t in index_sets:
        u = Subspace.full(field, rank)
        for j in t:
            u = u.intersect(subs[j])
        inter[t] = u
    counts = {}
    for t in index_sets:
        c = 0
        for s in index_sets:
            if set(t) <= set(s):
                c += (-1) ** (len(s) - len(t)) * inter[s].dim
        if c < 0:
            return None, "no adapted basis: intersection pattern %s has negative count %d" % (list(t), c)
        counts[t] = c
    chosen = []
    for t in index_sets:
        outside = [subs[j] for j in range(d) if j not in t]
        for _ in range(counts[t]):
            found = None
            for cand in _candidate_vectors(inter[t].basis, field):
                if any(v.contains_vector(cand) for v in outside):
                    continue
                if Matrix(field, [list(r) for r in chosen] + [list(cand)]).rank() == len(chosen):
                    continue
                found = cand
                break
            if found is None:
                return None, "no adapted basis: search exhausted at intersection pattern %s" % (list(t),)
            chosen.append(found)
    if len(chosen) != rank or Matrix(field, [list(r) for r in chosen]).rank() != rank:
        return None, "no adapted basis: greedy selection did not produce a basis"
    return tuple(chosen), None


def _cone_certificate(bundle: ToricVectorBundle, cone: Cone):
    field = bundle.field
    rank = bundle.rank
    subs = [bundle.filtrations[j].subspace for j in cone.rays]
    if len(subs) <= 2:
        basis = _adapted_basis_two(subs, rank, field)
        reason = None
    elif all(s.dim == rank - 1 for s in subs) and len({s for s in subs}) == len(subs):
        basis = _adapted_basis_hyperplanes(subs, rank, field)
        reason = "hyperplanes on cone %s do not intersect transversely" % (list(cone.rays),)
    else:
        basis, reason = _adapted_basis_general(subs, rank, field)
    if basis is None:
        return None, FailureWitness(cone, reason)
    characters = []
    ray_rows = [list(bundle.fan.rays[j]) for j in cone.rays]
    for line in basis:
        targets = []
        for pos, j in enumerate(cone.rays):
            f = bundle.filtrations[j]
            targets.append(f.shift + f.step if subs[pos].contains_vector(line) else f.shift)
        u = int_solve(ray_rows, targets)
        if u is None:
            return None, FailureWitness(cone, "no integer character for a basis line on cone %s" % (list(cone.rays),))
        characters.append(tuple(u))
    return ConeCertificate(cone, basis, tuple(characters)), None


def check_compatibility(bundle: ToricVectorBundle) -> CompatibilityResult:
    """Decide, cone by cone, whether the filtrations come from a toric
    vector bundle, and produce verified certificates when they do."""
    if not validate_fan(bundle.fan).ok:
        raise ValueError("compatibility requires a valid fan")
    if not is_smooth(bundle.fan)[0]:
        raise ValueError("compatibility requires a smooth fan")
    certificates = []
    for cone in bundle.fan.max_cones:
        cert, failure = _cone_certificate(bundle, cone)
        if failure is not None:
            return CompatibilityResult(False, tuple(certificates), failure)
        if not verify_certificate(bundle, cert):
            raise RuntimeError("certificate for cone %s failed re-verification" % (list(cone.rays),))
        certificates.append(cert)
    return CompatibilityResult(True, tuple(certificates))


def verify_certificate(bundle: ToricVectorBundle, cert: ConeCertificate) -> bool:
    """Definition-level check: the stored lines form a basis and reproduce
    every filtration value on the cone across the full step range."""
    field = bundle.field
    if Matrix(field, [list(r) for r in cert.lines]).rank() != bundle.rank:
        return False
    for pos, j in enumerate(cert.cone.rays):
        f = bundle.filtrations[j]
        v = bundle.fan.rays[j]
        for k in range(f.shift - 1, f.shift + f.step + 2):
            selected = [
                list(line)
                for line, u in zip(cert.lines, cert.characters)
                if sum(a * b for a, b in zip(u, v)) >= k
            ]
            span = Subspace.span(field, bundle.rank, selected)
            if span != f.value(k):
                return False
    return True


# ----------------------------------------------------------------------
# sections and symmetric powers


def isotypical_sections(bundle: ToricVectorBundle, cone: Cone, u) -> Subspace:
    """Weight-u sections over the cone's affine chart: the intersection of
    the filtration values at levels pairing u with each ray generator."""
    result = Subspace.full(bundle.field, bundle.rank)
    for j in cone.rays:
        k = sum(a * b for a, b in zip(u, bundle.fan.rays[j]))
        result = result.intersect(bundle.filtration_value(j, k))
    return result


def _monomials(r, m):
    """Exponent vectors of total degree m in r variables, lex order."""
    if r == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in _monomials(r - 1, m - first):
            out.append((first,) + rest)
    return out


def _product_coeffs(vectors, field, monomials):
    """Coefficient vector of the product of linear forms sum_i v[i] x_i."""
    r = len(vectors[0])
    poly = {(0,) * r: field.one}
    for v in vectors:
        new = {}
        for expo, c in poly.items():
            for i in range(r):
                if not v[i]:
                    continue
                e2 = list(expo)
                e2[i] += 1
                e2 = tuple(e2)
                new[e2] = new.get(e2, field.zero) + c * v[i]
        poly = new
    return [poly.get(mono, field.zero) for mono in monomials]


def sym_power_dimension(bundle: ToricVectorBundle, m: int):
    """Invariant-section count of the m-th twist on the projectivization,
    with the per-ray image dimensions of Sym^j(subspace) * Sym^(m-j)(fiber).

    The count depends only on rank: binom(r-1+m, m).  The image dimensions
    are computed exactly in the monomial basis.
    """
    if m < 0:
        raise ValueError("power must be nonnegative")
    if not bundle.is_normalized():
        raise ValueError("symmetric power data requires shift-normalized filtrations")
    r = bundle.rank
    field = bundle.field
    monomials = _monomials(r, m) if m > 0 else [(0,) * r]
    identity = [tuple(field.one if i == j else field.zero for j in range(r)) for i in range(r)]
    per_ray = []
    for f in bundle.filtrations:
        sub_rows = [tuple(x for x in row) for row in f.subspace.basis]
        levels = []
        for j in range(m + 1):
            rows = []
            for part1 in itertools.combinations_with_replacement(sub_rows, j):
                for part2 in itertools.combinations_with_replacement(identity, m - j):
                    vecs = list(part1) + list(part2)
                    if not vecs:
                        rows.append([field.one])
                        continue
                    rows.append(_product_coeffs(vecs, field, monomials))
            levels.append(Matrix(field, rows).rank() if rows else 0)
        per_ray.append(tuple(levels))
    return math.comb(r - 1 + m, m), tuple(per_ray)


# ----------------------------------------------------------------------
# the one-ray projectivization


@dataclass(frozen=True)
class ProjectivizationResult:
    """delta: the fan of the projectivized bundle over the ray's chart.
    quotient: the image fan in the fiber directions.
    center: the subdivision ray when the quotient is a blowup, else None.
    doubled_ray: the repeated ray when the blowup center is a divisor."""

    delta: Fan
    quotient: Fan
    center: object = None
    doubled_ray: object = None


def _ebar(j, r):
    """Images of the fiber basis vectors in Z^r/(1,...,1) coordinates."""
    if j < r - 1:
        return tuple(1 if i == j else 0 for i in range(r - 1))
    return tuple(-1 for _ in range(r - 1))


def single_ray_projectivization_fan(v_rho, filtration: RayFiltration, splitting) -> ProjectivizationResult:
    """The fan of P(bundle) over a one-ray chart, and the fiber-direction
    image fan of the open subset that the quotient construction uses.

    splitting: r vectors whose lines decompose the fiber, adapted to the
    filtration (those lying in the subspace must span it).  The image fan
    is checked against the expected model: the projective space fan, its
    stellar subdivision at the sum of the subspace lines' images, or the
    projective space fan with one ray arising twice (recorded in
    doubled_ray) when the subdivision vector is already a ray.
    """
    field = filtration.subspace.field
    r = len(splitting)
    if r < 2:
        raise ValueError("the projectivization fan needs rank at least 2")
    if filtration.subspace.ambient != r:
        raise ValueError("splitting size does not match the filtration's ambient dimension")
    lines = [tuple(field.of(x) for x in line) for line in splitting]
    if Matrix(field, [list(x) for x in lines]).rank() != r:
        raise ValueError("splitting lines do not span the fiber")
    inside = [j for j, line in enumerate(lines) if filtration.subspace.contains_vector(line)]
    in_rows = [list(lines[j]) for j in inside]
    if (Matrix(field, in_rows).rank() if in_rows else 0) != filtration.subspace.dim:
        raise ValueError("splitting is not adapted: its lines inside the subspace do not span it")
    v_rho = tuple(int(x) for x in v_rho)
    if not any(v_rho):
        raise ValueError("the ray generator must be nonzero")
    if ivec_primitive(v_rho) != v_rho:
        raise ValueError("the ray generator must be primitive")
    d = len(v_rho)
    k_set = set(inside)

    n = [filtration.shift + filtration.step if j in k_set else filtration.shift for j in range(r)]
    zero_d = (0,) * d
    delta_rays = [zero_d + _ebar(j, r) for j in range(r)]
    vtilde = v_rho + tuple(n[i] - n[r - 1] for i in range(r - 1))
    delta_rays.append(vtilde)
    max_cones = [Cone(tuple(i for i in range(r + 1) if i != j)) for j in range(r)]
    delta = Fan(d + r - 1, tuple(delta_rays), tuple(max_cones))
    report = validate_fan(delta)
    if not report.ok:
        raise RuntimeError("projectivization fan failed validation: %s" % (report.violations,))

    # faces of the open subset: drop faces meeting the two removed orbit
    # closures, then project the survivors to the fiber directions
    if k_set:
        removals = [{r} | (set(range(r)) - k_set), set(k_set)]
    else:
        removals = [{r}]
    survivors = set()
    for cone in max_cones:
        for size in range(len(cone.rays) + 1):
            for face in itertools.combinations(cone.rays, size):
                fs = frozenset(face)
                if any(rem <= fs for rem in removals):
                    continue
                survivors.add(fs)
    maximal = [f for f in survivors if not any(f < g for g in survivors)]

    w = ivec_primitive(tuple(sum(_ebar(j, r)[i] for j in k_set) for i in range(r - 1))) if k_set else None
    image_vector = {j: _ebar(j, r) for j in range(r)}
    image_vector[r] = w if k_set else None
    image_cones = set()
    for face in maximal:
        vecs = frozenset(image_vector[i] for i in face if image_vector[i] is not None)
        if vecs:
            image_cones.add(vecs)
    image_max = [c for c in image_cones if not any(c < g for g in image_cones)]

    q_rays = []
    for j in range(r):
        if any(_ebar(j, r) in c for c in image_max):
            q_rays.append(_ebar(j, r))
    if w is not None and w not in q_rays and any(w in c for c in image_max):
        q_rays.append(w)
    index = {v: i for i, v in enumerate(q_rays)}
    q_cones = sorted({tuple(sorted(index[v] for v in c)) for c in image_max})
    quotient = Fan(r - 1, tuple(q_rays), tuple(Cone(c) for c in q_cones))
    report = validate_fan(quotient)
    if not report.ok:
        raise RuntimeError("quotient fan failed validation: %s" % (report.violations,))

    model = projective_space_fan(r - 1)
    if not k_set:
        expected, center, doubled = model, None, None
    elif w in {_ebar(j, r) for j in range(r)}:
        expected, center, doubled = model, None, w
    else:
        expected, center, doubled = stellar_subdivide(model, w), w, None
    if not fans_equal_up_to_ray_order(quotient, expected):
        raise RuntimeError("image fan does not match the expected blowup model")
    return ProjectivizationResult(delta, quotient, center, doubled)
