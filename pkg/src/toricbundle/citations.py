"""Statement registry for classifier verdicts and reports.

Every verdict carries identifiers from this table so a report can be
audited without rerunning the pipeline.  Statements are facts from the
published literature on Cox rings of blowups and torus quotients; each
entry records the result it relies on, at the level of generality the
code actually checks.
"""

CITATIONS = {
    "polynomial-over-blowup": {
        "statement": (
            "The Cox ring of the projectivized bundle is a polynomial ring, "
            "with one free variable per zero-subspace ray, over the Cox ring "
            "of the blowup of the fiber projective space along the arrangement "
            "of centers determined by the nonzero subspaces."
        ),
        "source": "Hausen and Suess, torus-quotient presentation of Cox rings",
    },
    "finite-generation-transfer": {
        "statement": (
            "Long filtration steps, one-dimensional subspaces, and repeated "
            "subspaces change the presentation only by gluing relations that "
            "identify canonical sections with monomials, so the Cox ring is "
            "finitely generated exactly when the Cox ring of the blowup is."
        ),
        "source": "Hausen and Suess, quotient presentation for nonseparated quotients",
    },
    "invariant-sections": {
        "statement": (
            "Torus-invariant global sections of O(m) on the projectivized "
            "bundle restrict isomorphically to degree-m forms on the fiber."
        ),
        "source": "symmetric-power filtration computation",
    },
    "orbit-closure-class": {
        "statement": (
            "The torus-orbit closure of a degree-m hypersurface in the fiber "
            "is linearly equivalent to O(m) minus the sum, over rays with "
            "nonzero subspace, of the multiplicity at the corresponding point "
            "times the pullback divisor."
        ),
        "source": "isotypical weight computation along one-parameter subgroups",
    },
    "class-group-basis": {
        "statement": (
            "O(1) together with the pullback divisors over the rays outside "
            "one fixed maximal cone form a basis of the divisor class group "
            "of the projectivized bundle."
        ),
        "source": "standard toric divisor relations",
    },
    "effective-cone-generators": {
        "statement": (
            "The pseudoeffective cone of the projectivized bundle is generated "
            "by the relabeled effective classes of the blowup together with "
            "the pullback divisors over the zero-subspace rays."
        ),
        "source": "torus-invariant divisor decomposition",
    },
    "collinear-torus-action": {
        "statement": (
            "A blowup of projective space at collinear points carries a torus "
            "action with orbits of codimension one and is a Mori dream space."
        ),
        "source": "Elizondo-Kurano-Watanabe; Hausen-Suess; Ottem",
    },
    "rational-normal-curve": {
        "statement": (
            "A blowup of projective space at points lying on a rational "
            "normal curve is a Mori dream space."
        ),
        "source": "Castravet and Tevelev, Theorem 1.2",
    },
    "general-position-threshold": {
        "statement": (
            "The blowup of P^(r-1) at s points in general position is a Mori "
            "dream space when 1/r + 1/(s-r) > 1/2."
        ),
        "source": "Castravet and Tevelev, Theorem 1.3",
    },
    "very-general-threshold": {
        "statement": (
            "The Cox ring of the blowup of P^(r-1) at s very general points "
            "is not finitely generated when 1/r + 1/(s-r) <= 1/2, equivalently "
            "when s >= r + 2 + 4/(r-2)."
        ),
        "source": "Mukai",
    },
    "cubic-pencil-intersection": {
        "statement": (
            "For the nine-point configuration projectively equivalent to the "
            "3x3 integer grid, the reduced complete intersection of the pencil "
            "spanned by x^3 - x z^2 and y^3 - y z^2, the blowup of the "
            "projective plane is not a Mori dream space in any characteristic "
            "other than two or three."
        ),
        "source": "Totaro, Theorem 2.1, Corollary 5.1, Theorem 5.2",
    },
    "point-superset-transfer": {
        "statement": (
            "A blowup of projective space at a finite point set is not a Mori "
            "dream space when the blowup at a subset of the points is not."
        ),
        "source": "pushforward of non-finitely-generated Cox subrings",
    },
    "hyperplane-polynomial-extension": {
        "statement": (
            "For a point set contained in a hyperplane H of P^d with d > 2, "
            "the Cox ring of the blowup of P^d is a polynomial ring in one "
            "variable over the Cox ring of the blowup of H."
        ),
        "source": "one-parameter scaling action on the defining coordinate",
    },
    "kapranov-moduli": {
        "statement": (
            "The blowup of P^(r-1) along all subspaces of codimension at "
            "least 2 spanned by subsets of r+1 points in general position is "
            "isomorphic to the Deligne-Mumford moduli space of stable rational "
            "curves with r+2 marked points."
        ),
        "source": "Kapranov",
    },
    "moduli-finite-generation-open": {
        "statement": (
            "It is not known whether the Cox ring of the moduli space of "
            "stable pointed rational curves is finitely generated."
        ),
        "source": "open problem",
    },
    "tangent-cox-ring": {
        "statement": (
            "The Cox ring of the projectivized tangent bundle of a smooth "
            "complete toric variety without opposite rays is generated by "
            "pairs x_i, y_i subject to one bilinear relation per linear "
            "dependency among the ray generators."
        ),
        "source": "Hausen and Suess",
    },
    "non-polyhedral-blowup": {
        "statement": (
            "The pseudoeffective cone of the blowup of the projective plane "
            "at nine very general points is not polyhedral; it has infinitely "
            "many extremal rays spanned by (-1)-classes."
        ),
        "source": "Mukai; Nagata's construction",
    },
}


def citation_statement(identifier: str) -> str:
    if identifier not in CITATIONS:
        raise ValueError("unknown citation identifier %r" % (identifier,))
    return CITATIONS[identifier]["statement"]
