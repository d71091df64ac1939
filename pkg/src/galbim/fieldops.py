"""Subfield computations inside a fixed ambient tower.

Everything here reduces to linear algebra over the ambient tower's
*scalar layer*: the highest non-algebraic layer (the rationals, a prime
field, or a rational function field).  All layers above it are finite
algebraic extensions, so the ambient field is a finite-dimensional
vector space over the scalar layer and subfields become subspaces.

A Subfield packages a presented field together with an embedding
morphism into the ambient tower; when the subfield happens to be an
actual tower layer the embedding is the canonical inclusion, and the
same code paths handle both cases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    FieldMismatch,
    PrimitiveElementNotFound,
    ResolutionError,
    UnsupportedBase,
)
from .matrix import Matrix
from .morphisms import (
    AutomorphismGroup,
    FieldMorphism,
    identity_morphism,
    inclusion_morphism,
)
from .poly import Polynomial
from .towers import (
    DEFAULT_TOWER_CAP,
    ExtensionField,
    RationalFunctionField,
    algebraic_degree,
    chain,
    coords_over,
    extend,
    from_coords_over,
    is_layer_of,
    tower_basis,
)

PRIMITIVE_BUDGET = 1000


def scalar_layer(field):
    """The highest non-algebraic layer of the tower."""
    best = None
    for layer in chain(field):
        if not isinstance(layer, ExtensionField):
            best = layer
    return best


_basis_cache = {}


def cached_basis(field, down):
    key = (field, down)
    if key not in _basis_cache:
        _basis_cache[key] = tower_basis(field, down)
    return _basis_cache[key]


@dataclass
class Subfield:
    """A subfield of ``ambient``, presented on its own and embedded."""

    ambient: object
    field: object
    embedding: FieldMorphism

    @staticmethod
    def from_layer(ambient, layer):
        if not is_layer_of(layer, ambient):
            raise FieldMismatch("%r is not a layer of %r" % (layer, ambient))
        return Subfield(ambient, layer, inclusion_morphism(layer, ambient))

    def embed(self, x):
        return self.embedding.apply(x)

    def degree_in_ambient(self):
        f0 = scalar_layer(self.ambient)
        return algebraic_degree(self.ambient, f0) // self.dimension()

    def dimension(self):
        f0 = scalar_layer(self.field)
        return algebraic_degree(self.field, f0)

    def basis_in_ambient(self):
        f0 = scalar_layer(self.field)
        return [self.embed(b) for b in cached_basis(self.field, f0)]


def min_poly_over(ambient, x, sub) -> Polynomial:
    """Monic minimal polynomial of ``x`` (element of ``ambient``) over a
    subfield, returned over the subfield's own presentation.

    ``sub`` may be a Subfield or a tower layer of the ambient field."""
    if not isinstance(sub, Subfield):
        sub = Subfield.from_layer(ambient, sub)
    f0 = scalar_layer(ambient)
    x = ambient.coerce(x)
    n = algebraic_degree(ambient, f0)
    basis_k = sub.basis_in_ambient()
    m = len(basis_k)
    powers = [ambient.one()]
    columns = []  # coords of basis_k[l] * x^i, grouped i-major
    while True:
        k = len(powers)
        if k > n:
            raise ResolutionError("minimal polynomial search overran")
        xk = powers[-1] * x
        target = [-c for c in coords_over(ambient, xk, f0)]
        for b in basis_k:
            columns.append(coords_over(ambient, b * powers[-1], f0))
        M = Matrix(f0, [[col[r] for col in columns] for r in range(n)])
        sol = M.solve(target)
        if sol is not None:
            coeffs = []
            for i in range(k):
                coeffs.append(
                    from_coords_over(
                        sub.field, sol[i * m : (i + 1) * m], scalar_layer(sub.field)
                    )
                )
            coeffs.append(sub.field.one())
            return Polynomial(sub.field, coeffs)
        powers.append(xk)


def element_matrix(ambient, sigma: FieldMorphism, f0=None) -> Matrix:
    """Matrix of the morphism on the ambient field, in the tower basis
    over the scalar layer (columns are images of basis vectors)."""
    if f0 is None:
        f0 = scalar_layer(ambient)
    basis = cached_basis(ambient, f0)
    cols = [coords_over(ambient, sigma.apply(b), f0) for b in basis]
    return Matrix.from_cols(f0, cols)


def fixed_field(ambient, morphisms, budget=PRIMITIVE_BUDGET) -> Subfield:
    """Common fixed subfield of a set of automorphisms, as a Subfield.

    Prefers recognizing the fixed space as an existing tower layer;
    otherwise synthesizes a primitive element, presenting the subfield
    as a fresh simple extension of the scalar layer."""
    if isinstance(morphisms, AutomorphismGroup):
        morphisms = list(morphisms)
    f0 = scalar_layer(ambient)
    n = algebraic_degree(ambient, f0)
    basis = cached_basis(ambient, f0)
    rows = []
    for sigma in morphisms:
        if sigma.is_identity():
            continue
        M = element_matrix(ambient, sigma, f0)
        I = Matrix.identity(f0, n)
        delta = M - I
        rows.extend(delta.rows)
    if not rows:
        return Subfield(ambient, ambient, identity_morphism(ambient))
    stack = Matrix(f0, rows, ncols=n)
    kernel = stack.kernel()
    vectors = [from_coords_over(ambient, v, f0) for v in kernel]
    return subfield_from_vectors(ambient, vectors, budget=budget)


def subfield_from_vectors(ambient, vectors, budget=PRIMITIVE_BUDGET):
    """Present the span of the given elements as a Subfield.

    The span must actually be a subfield; the caller is responsible for
    that (closure under products is checked by the callers that solve
    for the span, not here).  Prefers recognizing an existing tower
    layer; otherwise synthesizes a primitive element over the scalar
    layer."""
    f0 = scalar_layer(ambient)
    n = algebraic_degree(ambient, f0)
    d = len(vectors)
    # try to recognize the space as an existing tower layer
    for layer in chain(ambient):
        if isinstance(layer, ExtensionField) or layer is f0:
            try:
                deg = algebraic_degree(layer, f0)
            except (FieldMismatch, UnsupportedBase):
                continue
            if deg != d:
                continue
            if all(_member_of_layer(ambient, v, layer) for v in vectors):
                return Subfield.from_layer(ambient, layer)
    # synthesize a primitive element deterministically
    rng = random.Random(20200 + n)
    candidates = list(vectors)
    attempts = 0
    while attempts < budget:
        if candidates:
            v = candidates.pop(0)
        else:
            weights = [rng.randint(-3, 3) for _ in vectors]
            v = ambient.zero()
            for w, vec in zip(weights, vectors):
                if w:
                    v = v + ambient.from_int(w) * vec
        attempts += 1
        if not v:
            continue
        mu = min_poly_over(ambient, v, f0)
        if mu.degree == d:
            name = "w%d" % d
            presented = extend(f0, mu, name, validate=False)
            embedding = FieldMorphism(
                presented, ambient, {presented: v}, check=True
            )
            return Subfield(ambient, presented, embedding)
    raise PrimitiveElementNotFound(
        "no primitive element for the subfield within %d attempts" % budget
    )


def primitive_element_over(ambient, sub: Subfield, budget=PRIMITIVE_BUDGET):
    """An element of the ambient field generating it over the subfield.

    Tries tower generators first, then small integer combinations."""
    n = sub.degree_in_ambient()
    if n == 1:
        return ambient.one()
    gens = []
    for layer in chain(ambient):
        if isinstance(layer, (ExtensionField, RationalFunctionField)):
            g = ambient.coerce(layer.gen())
            gens.append(g)
    gens.reverse()  # topmost generators are the most likely to work
    tried = 0
    for g in gens:
        tried += 1
        if min_poly_over(ambient, g, sub).degree == n:
            return g
    rng = random.Random(31100 + n)
    while tried < budget:
        weights = [rng.randint(-2, 2) for _ in gens]
        v = ambient.zero()
        for w, g in zip(weights, gens):
            if w:
                v = v + ambient.from_int(w) * g
        tried += 1
        if not v:
            continue
        if min_poly_over(ambient, v, sub).degree == n:
            return v
    raise PrimitiveElementNotFound(
        "no primitive element over the subfield within %d attempts" % budget
    )


def _member_of_layer(ambient, x, layer) -> bool:
    if layer is ambient:
        return True
    cs = coords_over(ambient, x, layer)
    return all(not c for c in cs[1:])


def subfield_contains(sub: Subfield, x) -> bool:
    """Whether ambient element x lies in the embedded subfield."""
    f0 = scalar_layer(sub.ambient)
    basis = sub.basis_in_ambient()
    cols = [coords_over(sub.ambient, b, f0) for b in basis]
    M = Matrix.from_cols(f0, cols)
    return M.solve(coords_over(sub.ambient, sub.ambient.coerce(x), f0)) is not None


def subfield_coords(sub: Subfield, x):
    """Coordinates of x over the scalar layer in the subfield basis,
    as an element of the presented subfield; None if x is outside."""
    f0 = scalar_layer(sub.ambient)
    basis = sub.basis_in_ambient()
    cols = [coords_over(sub.ambient, b, f0) for b in basis]
    M = Matrix.from_cols(f0, cols)
    sol = M.solve(coords_over(sub.ambient, sub.ambient.coerce(x), f0))
    if sol is None:
        return None
    return from_coords_over(sub.field, sol, scalar_layer(sub.field))


# -------------------------------------------------------- splitting data


@dataclass
class SplittingData:
    """A field where a polynomial splits, with located roots.

    ``roots`` lists (root, multiplicity) pairs inside ``field``;
    ``verified_split`` records that the product of located linear
    factors reproduces the polynomial; ``minimal`` is True when the
    field was built root by root (computed mode), None when an
    externally supplied tower was only verified to contain the roots."""

    polynomial: Polynomial
    base: object
    field: object
    roots: list
    verified_split: bool
    minimal: object  # True | None

    def root_list(self):
        out = []
        for r, m in self.roots:
            out.extend([r] * m)
        return out


def splitting_field(
    f: Polynomial,
    max_degree: int = DEFAULT_TOWER_CAP,
    var_prefix: str = "r",
) -> SplittingData:
    """Build a splitting field of f over its coefficient field by
    repeatedly adjoining a root of a nonlinear irreducible factor.

    Supported for coefficient towers over the rationals or a prime
    field (anything factor_poly handles); raises DegreeBound when the
    tower would outgrow the cap."""
    from .factor import factor_poly

    base = f.field
    if f.degree == 1:
        root = -f.coeff(0) / f.coeff(1)
        return SplittingData(
            polynomial=f,
            base=base,
            field=base,
            roots=[(root, 1)],
            verified_split=True,
            minimal=True,
        )
    E = base
    counter = 0
    while True:
        fE = f.map_coeffs(E, E.coerce) if E is not base else f
        _, factors = factor_poly(fE, max_degree=max(f.degree, 1))
        nonlinear = [g for g, _ in factors if g.degree > 1]
        if not nonlinear:
            roots = [(-g.coeff(0), m) for g, m in factors]
            return SplittingData(
                polynomial=f,
                base=base,
                field=E,
                roots=roots,
                verified_split=True,
                minimal=True,
            )
        counter += 1
        g = nonlinear[0]
        E = extend(
            E, g, "%s%d" % (var_prefix, counter), max_degree=max_degree,
            validate=False,
        )


def locate_roots(f: Polynomial, E, hints=(), allow_partial=False):
    """Find roots of f inside the tower E by candidate search.

    f's coefficients live in a sublayer of E (or E itself).  Returns
    (root, multiplicity) pairs; raises ResolutionError if the located
    roots do not fully split f.  With allow_partial=True returns
    (pairs, remaining_factor) instead of raising."""
    from .morphisms import _candidate_pool

    fE = f.map_coeffs(E, E.coerce)
    pool = _candidate_pool(E, hints)
    found = []
    remaining = fE
    for r in pool:
        if remaining.degree < 1:
            break
        mult = 0
        while True:
            val = remaining.evaluate(r)
            if val:
                break
            x_minus_r = Polynomial(E, [-r, E.one()])
            remaining = remaining // x_minus_r
            mult += 1
        if mult:
            found.append((r, mult))
    if remaining.degree >= 2:
        # pool missed some root; fall back to real factorization where
        # the tower supports it
        from .factor import roots_in_coefficient_field

        try:
            located = roots_in_coefficient_field(remaining)
        except UnsupportedBase:
            located = []
        for r, mult in located:
            found.append((r, mult))
            x_minus_r = Polynomial(E, [-r, E.one()])
            for _ in range(mult):
                remaining = remaining // x_minus_r
    if remaining.degree == 1:
        # sum-of-roots completion for the last missing root
        r = -remaining.coeff(0) / remaining.coeff(1)
        found.append((r, 1))
        remaining = Polynomial.one(E)
    if allow_partial:
        return found, remaining
    if remaining.degree >= 1:
        raise ResolutionError(
            "could not split the polynomial in the supplied tower; "
            "%d degrees unaccounted for (supply root hints)"
            % remaining.degree
        )
    return found


def verify_splitting(
    f: Polynomial, E, hints=(), base=None
) -> SplittingData:
    """Verification-mode splitting data: check that f splits inside an
    externally supplied tower E."""
    roots = locate_roots(f, E, hints=hints)
    return SplittingData(
        polynomial=f,
        base=base if base is not None else f.field,
        field=E,
        roots=roots,
        verified_split=True,
        minimal=None,
    )


# ------------------------------------------------------- inseparability


def inseparable_degree(mu: Polynomial):
    """(nu, e) with mu(x) = nu(x^(p^e)) and nu separable; e = 0 in
    characteristic zero."""
    p = mu.field.characteristic
    e = 0
    if p == 0:
        return mu, 0
    while mu.derivative().is_zero() and mu.degree > 0:
        coeffs = [mu.coeffs[i] for i in range(0, len(mu.coeffs), p)]
        mu = Polynomial(mu.field, coeffs)
        e += 1
    return mu, e
