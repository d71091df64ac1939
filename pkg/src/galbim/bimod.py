"""Bimodules over a field tower, presented through the left action.

A bimodule of right rank d over a field L is stored as a ring map
phi: L -> Mat_d(L), given by one matrix per tower layer (generator
image for algebraic layers, variable image for rational function
layers).  Elements are column vectors; the right action is
coordinatewise, the left action of a is multiplication by phi(a), so
split factors are exactly the vectors v with phi(a) v = sigma(a) v for
a twisting endomorphism sigma.

The structural analysis works at the L-level.  Over the center F the
bimodule decomposes along the irreducible factors mu_k over L of the
minimal polynomial mu of a primitive element a_prim of L/F, and the
multiplicity of each factor is read off from the (generalized) kernel
of mu_k(phi(a_prim)) without ever triangularizing over the splitting
field.  The splitting field only contributes its root layout: the
factor/character correspondence comes from grouping embeddings of L by
orbits of the stabilizer of the embedded copy of L.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ClassificationFailed,
    CoefficientEscapesZ,
    DegreeBound,
    FieldMismatch,
    NotAHomomorphism,
    NotAPower,
    NotInvertible,
    PrimitiveElementNotFound,
    ResolutionError,
    UnsupportedBase,
)

# The analysis entry point can fail for any of these reasons without
# deciding anything; the property checks then answer None.
ANALYSIS_OBSTRUCTIONS = (
    UnsupportedBase,
    PrimitiveElementNotFound,
    ResolutionError,
    DegreeBound,
)
from .factor import _elem_sort_key
from .fieldops import (
    SplittingData,
    Subfield,
    cached_basis,
    fixed_field,
    min_poly_over,
    primitive_element_over,
    scalar_layer,
    splitting_field,
    subfield_contains,
    subfield_coords,
    subfield_from_vectors,
    verify_splitting,
)
from .linalg import center_kernel, stack_kernel
from .matrix import Matrix
from .morphisms import (
    AutomorphismGroup,
    FieldMorphism,
    automorphisms_over,
    embeddings_over,
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
    is_layer_of,
    tower_basis,
)

PHI_CACHE_SIZE = 512


def _tower_generators(field):
    """Coerced generators of every non-bottom layer, bottom first."""
    out = []
    for layer in chain(field):
        if isinstance(layer, (ExtensionField, RationalFunctionField)):
            out.append(field.coerce(layer.gen()))
    return out


def _is_scalar(M: Matrix) -> bool:
    d = M.nrows
    top = M.rows[0][0]
    for i in range(d):
        for j in range(d):
            if i == j:
                if M.rows[i][j] != top:
                    return False
            elif M.rows[i][j]:
                return False
    return True


class Bimodule:
    """phi-presented (L, L)-bimodule, free of finite rank as a right
    module."""

    __slots__ = ("field", "rank", "images", "base", "label", "_phi_cache",
                 "_center", "_analyses")

    def __init__(self, field, images=None, rank=None, base=None,
                 check=True, label=None):
        self.field = field
        self.label = label
        self.base = base
        supplied = dict(images or {})
        full = {}
        for layer in chain(field):
            if not isinstance(layer, (ExtensionField, RationalFunctionField)):
                continue
            if layer in supplied:
                M = supplied.pop(layer)
                rows = [[field.coerce(e) for e in row] for row in M.rows]
                M = Matrix(field, rows)
                if M.nrows != M.ncols:
                    raise NotAHomomorphism("layer image is not square")
                if rank is None:
                    rank = M.nrows
                elif M.nrows != rank:
                    raise NotAHomomorphism("layer images of unequal size")
                full[layer] = M
            else:
                full[layer] = None  # canonical scalar, filled below
        if supplied:
            raise FieldMismatch(
                "image supplied for a field that is not a tower layer"
            )
        if rank is None:
            raise NotAHomomorphism("rank is undetermined: supply it")
        self.rank = rank
        for layer, M in full.items():
            if M is None:
                g = field.coerce(layer.gen())
                full[layer] = Matrix.identity(field, rank).scale(g)
        self.images = full
        self._phi_cache = {}
        self._center = None
        self._analyses = {}
        if check:
            self._verify()

    # ------------------------------------------------------- validation

    def _verify(self):
        nonscalar = [
            M for M in self.images.values() if not _is_scalar(M)
        ]
        for i, A in enumerate(nonscalar):
            for B in nonscalar[i + 1:]:
                if A * B != B * A:
                    raise NotAHomomorphism(
                        "layer images do not commute; the presentation "
                        "does not extend to a ring map"
                    )
        for layer, M in self.images.items():
            if isinstance(layer, ExtensionField):
                value = layer.relation.evaluate(
                    M, lift=lambda c, _l=layer: self._phi(c, _l.base)
                )
                if not value.is_zero():
                    raise NotAHomomorphism(
                        "image of %s violates its defining relation"
                        % layer.var
                    )
            else:
                try:
                    M.inverse()
                except NotInvertible:
                    raise NotInvertible(
                        "image of the variable %s is singular, so the "
                        "map has no extension to rational functions"
                        % layer.var
                    )
        if self.base is not None:
            for e in _base_elements(self.field, self.base):
                if not _is_scalar_value(self.phi(e), self.field.coerce(e)):
                    raise NotAHomomorphism(
                        "declared base field is not central in the action"
                    )

    # ------------------------------------------------------- evaluation

    def phi(self, a):
        a = self.field.coerce(a)
        cached = self._phi_cache.get(a)
        if cached is not None:
            return cached
        M = self._phi(a, self.field)
        if len(self._phi_cache) < PHI_CACHE_SIZE:
            self._phi_cache[a] = M
        return M

    def _phi(self, x, layer):
        if isinstance(layer, ExtensionField):
            x = layer.coerce(x)
            img = self.images[layer]
            acc = self._phi(x.coords[-1], layer.base)
            for c in reversed(x.coords[:-1]):
                acc = acc * img + self._phi(c, layer.base)
            return acc
        if isinstance(layer, RationalFunctionField):
            x = layer.coerce(x)
            img = self.images[layer]
            num = self._phi_poly(x.num, img, layer.coefficient_field)
            if x.is_polynomial():
                return num
            den = self._phi_poly(x.den, img, layer.coefficient_field)
            return num * den.inverse()
        return Matrix.identity(self.field, self.rank).scale(
            self.field.coerce(x)
        )

    def _phi_poly(self, p, at, coeff_layer):
        if p.is_zero():
            return Matrix.zeros(self.field, self.rank)
        acc = self._phi(p.leading(), coeff_layer)
        for j in range(p.degree - 1, -1, -1):
            acc = acc * at + self._phi(p.coeff(j), coeff_layer)
        return acc

    # -------------------------------------------------------- structure

    def center(self):
        """(Subfield, exact) for the central field {z : phi(z) = z Id}.

        When the action moves the scalar layer the equation is not
        linear over it; then only the declared base is reported, with
        exact=False."""
        if self._center is None:
            f0 = scalar_layer(self.field)
            linear = True
            for layer in chain(f0):
                if isinstance(layer, (ExtensionField, RationalFunctionField)):
                    g = self.field.coerce(layer.gen())
                    if not _is_scalar_value(self.phi(g), g):
                        linear = False
                        break
            if not linear:
                if self.base is None:
                    self._center = (None, False)
                else:
                    self._center = (_as_subfield(self.field, self.base), False)
            else:
                vectors = center_kernel(self.field, self.phi)
                sub = subfield_from_vectors(self.field, vectors)
                self._center = (sub, True)
        return self._center

    def __repr__(self):
        tag = self.label or "bimodule"
        return "<%s of rank %d over %r>" % (tag, self.rank, self.field)


def _is_scalar_value(M: Matrix, value) -> bool:
    d = M.nrows
    for i in range(d):
        for j in range(d):
            want = value if i == j else None
            e = M.rows[i][j]
            if want is None:
                if e:
                    return False
            elif e != want:
                return False
    return True


def _base_elements(field, base):
    if isinstance(base, Subfield):
        return base.basis_in_ambient()
    out = []
    for layer in chain(base):
        if isinstance(layer, (ExtensionField, RationalFunctionField)):
            out.append(field.coerce(layer.gen()))
    return out


def _as_subfield(field, base):
    if isinstance(base, Subfield):
        return base
    return Subfield.from_layer(field, base)


# ------------------------------------------------------------ constructors


def twist(field, sigma: FieldMorphism, base=None) -> Bimodule:
    """Rank-one bimodule where the left action goes through sigma."""
    if sigma.domain is not field or sigma.codomain is not field:
        raise FieldMismatch("twisting endomorphism must act on the field")
    images = {}
    for layer in chain(field):
        if isinstance(layer, (ExtensionField, RationalFunctionField)):
            g = field.coerce(layer.gen())
            images[layer] = Matrix(field, [[sigma.apply(g)]])
    return Bimodule(field, images, base=base, label="twist")


def bimodule_of_group(field, group, multiplicity=1, base=None) -> Bimodule:
    """Direct sum of twists over a finite set of automorphisms.

    ``multiplicity`` is either a single count shared by all elements or
    a sequence of per-element counts (same order as ``group``); blocks
    follow the group order, each element contributing its own run of
    identical twists."""
    elements = list(group)
    if isinstance(multiplicity, int):
        mults = [multiplicity] * len(elements)
    else:
        mults = [int(m) for m in multiplicity]
        if len(mults) != len(elements):
            raise ValueError(
                "need one multiplicity per group element, got %d for %d"
                % (len(mults), len(elements))
            )
    if any(m < 0 for m in mults):
        raise ValueError("multiplicities must be nonnegative")
    d = sum(mults)
    if d == 0:
        raise ValueError("the zero bimodule is not representable")
    images = {}
    for layer in chain(field):
        if isinstance(layer, (ExtensionField, RationalFunctionField)):
            g = field.coerce(layer.gen())
            diag = []
            for sigma, m in zip(elements, mults):
                diag.extend([sigma.apply(g)] * m)
            images[layer] = Matrix.diagonal(field, diag)
    return Bimodule(field, images, rank=d, base=base, label="group action")


def regular_over(field, sub, base=None) -> Bimodule:
    """The bimodule L (x)_K L for a subfield K, of rank [L : K]."""
    sub = _as_subfield(field, sub)
    if base is None:
        base = sub
    f0 = scalar_layer(field)
    n = algebraic_degree(field, f0)
    kbasis = sub.basis_in_ambient()
    mk = len(kbasis)
    lbasis = _module_basis_over(field, sub)
    m = len(lbasis)
    if m * mk != n:
        raise ResolutionError("degree bookkeeping failed for the subfield")
    cols = []
    for b in lbasis:
        for k in kbasis:
            cols.append(coords_over(field, b * k, f0))
    solver = Matrix.from_cols(f0, cols)
    images = {}
    for layer in chain(field):
        if not isinstance(layer, (ExtensionField, RationalFunctionField)):
            continue
        g = field.coerce(layer.gen())
        rows = [[None] * m for _ in range(m)]
        for j in range(m):
            sol = solver.solve(coords_over(field, g * lbasis[j], f0))
            if sol is None:
                raise ResolutionError(
                    "multiplication escaped the subfield module basis"
                )
            for l in range(m):
                entry = field.zero()
                for i in range(mk):
                    c = sol[l * mk + i]
                    if c:
                        entry = entry + field.coerce(c) * kbasis[i]
                rows[l][j] = entry
        images[layer] = Matrix(field, rows)
    label = "regular bimodule"
    return Bimodule(field, images, rank=m, base=base, label=label)


def _module_basis_over(field, sub: Subfield):
    """A basis of the field as a vector space over the subfield."""
    f0 = scalar_layer(field)
    n = algebraic_degree(field, f0)
    if is_layer_of(sub.field, field) and all(
        sub.embed(sub.field.coerce(layer.gen()))
        == field.coerce(layer.gen())
        for layer in chain(sub.field)
        if isinstance(layer, (ExtensionField, RationalFunctionField))
    ):
        return [field.coerce(b) for b in tower_basis(field, sub.field)]
    kbasis = sub.basis_in_ambient()
    chosen = []
    span_cols = []
    for cand in cached_basis(field, f0):
        if len(chosen) * len(kbasis) >= n:
            break
        trial = span_cols + [
            coords_over(field, cand * k, f0) for k in kbasis
        ]
        if Matrix.from_cols(f0, trial).rank() == len(trial):
            chosen.append(cand)
            span_cols = trial
    if len(chosen) * len(kbasis) != n:
        raise ResolutionError("could not complete a module basis")
    return chosen


def tensor(P: Bimodule, Q: Bimodule) -> Bimodule:
    """Tensor product over L: apply Q's action entrywise to P's."""
    if P.field is not Q.field:
        raise FieldMismatch("tensor factors live over different fields")
    field = P.field
    images = {}
    for layer in chain(field):
        if not isinstance(layer, (ExtensionField, RationalFunctionField)):
            continue
        A = P.images[layer]
        blocks = [
            [Q.phi(A.rows[i][j]) for j in range(P.rank)]
            for i in range(P.rank)
        ]
        images[layer] = Matrix.from_blocks(field, blocks)
    base = P.base if P.base is Q.base else None
    return Bimodule(field, images, rank=P.rank * Q.rank, base=base,
                    label="tensor")


def tensor_power(P: Bimodule, k: int) -> Bimodule:
    """k-fold tensor product of the bimodule with itself."""
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    out = P
    for _ in range(k - 1):
        out = tensor(out, P)
    return out


def direct_sum(P: Bimodule, Q: Bimodule) -> Bimodule:
    if P.field is not Q.field:
        raise FieldMismatch("summands live over different fields")
    field = P.field
    images = {}
    for layer in chain(field):
        if not isinstance(layer, (ExtensionField, RationalFunctionField)):
            continue
        A, B = P.images[layer], Q.images[layer]
        zeroTR = Matrix.zeros(field, P.rank, Q.rank)
        zeroBL = Matrix.zeros(field, Q.rank, P.rank)
        images[layer] = Matrix.from_blocks(
            field, [[A, zeroTR], [zeroBL, B]]
        )
    base = P.base if P.base is Q.base else None
    return Bimodule(field, images, rank=P.rank + Q.rank, base=base,
                    label="direct sum")


def base_change(P: Bimodule, E) -> Bimodule:
    """Extend scalars on both sides along a literal tower extension
    E of the bimodule's field; the rank multiplies by [E : L]."""
    L = P.field
    if not is_layer_of(L, E):
        raise FieldMismatch("base change target must extend the tower")
    basis = [E.coerce(b) for b in tower_basis(E, L)]
    m = len(basis)
    images = {}
    for layer in chain(E):
        if not isinstance(layer, (ExtensionField, RationalFunctionField)):
            continue
        g = E.coerce(layer.gen())
        blocks = [[None] * m for _ in range(m)]
        for k in range(m):
            lam = coords_over(E, g * basis[k], L)
            for l in range(m):
                small = P.phi(lam[l])
                blocks[l][k] = small.map_entries(E.coerce, E)
        images[layer] = Matrix.from_blocks(E, blocks)
    base = P.base
    return Bimodule(E, images, rank=P.rank * m, base=base,
                    label="base change")


def restrict_scalars(P: Bimodule, layer) -> Bimodule:
    """View the bimodule over a lower tower layer K; the rank
    multiplies by [L : K]."""
    L = P.field
    if not is_layer_of(layer, L):
        raise FieldMismatch("restriction target must be a tower layer")
    cbasis = [L.coerce(b) for b in tower_basis(L, layer)]
    s = len(cbasis)
    d = P.rank
    images = {}
    for lay in chain(layer):
        if not isinstance(lay, (ExtensionField, RationalFunctionField)):
            continue
        a = L.coerce(lay.gen())
        A = P.phi(a)
        rows = [[None] * (d * s) for _ in range(d * s)]
        for i in range(d):
            for j in range(s):
                for k in range(d):
                    cs = coords_over(L, A.rows[k][i] * cbasis[j], layer)
                    for l in range(s):
                        rows[k * s + l][i * s + j] = cs[l]
        images[lay] = Matrix(layer, rows)
    return Bimodule(layer, images, rank=d * s, label="restricted")


# ----------------------------------------------------- right polynomials


def min_poly_right(P: Bimodule, a, require_central=False) -> Polynomial:
    """Minimal polynomial of right multiplication transport phi(a).

    With ``require_central`` the coefficients are checked against the
    exact center; escape raises CoefficientEscapesZ.  For weakly Galois
    bimodules the coefficients always lie in the center, so an escape
    certifies the input is not weakly Galois."""
    mu = P.phi(a).minpoly()
    if require_central:
        center, exact = P.center()
        if not exact or center is None:
            raise UnsupportedBase(
                "cannot certify central coefficients without the exact "
                "center"
            )
        verify_central_coefficients(mu, center)
    return mu


def char_poly_right(P: Bimodule, a):
    """(mu, k) with charpoly(phi(a)) = mu^k for the minimal polynomial
    mu; raises NotAPower when the characteristic polynomial is not a
    perfect power of it."""
    M = P.phi(a)
    chi = M.charpoly()
    mu = M.minpoly()
    if mu.degree == 0 or chi.degree % mu.degree:
        raise NotAPower(
            "characteristic polynomial is not a power of the minimal one"
        )
    k = chi.degree // mu.degree
    if mu**k != chi:
        raise NotAPower(
            "characteristic polynomial is not a power of the minimal one"
        )
    return mu, k


def verify_central_coefficients(poly: Polynomial, center, label="center"):
    """Check every coefficient against a membership test; ``center``
    is a Subfield or a predicate.  Raises CoefficientEscapesZ."""
    if isinstance(center, Subfield):
        member = lambda c: subfield_contains(center, c)
    else:
        member = center
    for i, c in enumerate(poly.coeffs):
        if not member(c):
            raise CoefficientEscapesZ(
                "coefficient of degree %d lies outside the %s: %r"
                % (i, label, c)
            )
    return True


# ----------------------------------------------------------- analysis


@dataclass
class GrFactor:
    """One isotypic slot of the composition series at the L-level."""

    min_poly: Polynomial      # irreducible over L
    multiplicity: int         # composition multiplicity in the bimodule
    insep_exponent: int       # e with the factor purely inseparable p^e
    characters: list          # embeddings L -> E realized by this factor


@dataclass
class BimoduleAnalysis:
    bimodule: Bimodule
    center: Subfield
    primitive: object
    min_poly: Polynomial      # of the primitive element, over the center
    splitting: SplittingData
    iota: FieldMorphism       # chosen embedding of L in the splitting field
    gamma: AutomorphismGroup  # automorphisms of E over the center
    h_indices: list           # stabilizer of iota(L) inside gamma
    factors: list             # GrFactor entries, zero multiplicities kept
    semisimple: bool
    is_split: bool
    h_normal: bool

    def characters(self):
        return [(g, f.multiplicity) for f in self.factors
                for g in f.characters]

    def support(self):
        return [g for f in self.factors if f.multiplicity
                for g in f.characters]

    def multiset_key(self):
        """Canonical hashable form of the character multiset."""
        items = sorted(
            (g.key(), f.multiplicity)
            for f in self.factors
            for g in f.characters
        )
        return tuple(items)

    def factor_multiplicities(self):
        return sorted(
            (f.min_poly.degree, f.multiplicity) for f in self.factors
        )


def analyze(P: Bimodule, E=None, iota_images=None, hints=(),
            expected_gamma=None,
            max_degree=DEFAULT_TOWER_CAP) -> BimoduleAnalysis:
    """Full composition-series analysis of a bimodule over its center.

    In computed mode the splitting tower for the primitive element's
    minimal polynomial is built by factorization; towers over rational
    function fields cannot be factored, so there the caller supplies a
    tower E (built over the same center layer) together with optional
    root hints, and everything found inside it is verified rather than
    trusted."""
    iota_key = None
    if iota_images is not None:
        iota_key = tuple(sorted(
            (layer.var, _elem_sort_key(img))
            for layer, img in iota_images.items()
        ))
    ck = (id(E), iota_key, tuple(_elem_sort_key(h) for h in hints),
          expected_gamma)
    cached = P._analyses.get(ck)
    if cached is not None:
        return cached
    L = P.field
    d = P.rank
    center, exact = P.center()
    if not exact or center is None:
        raise UnsupportedBase(
            "the center is only bounded below by the declared base; "
            "the composition analysis needs the exact center"
        )
    n = center.degree_in_ambient()
    a = primitive_element_over(L, center)
    mu = min_poly_over(L, a, center)
    if E is None:
        splitting = splitting_field(mu, max_degree=max_degree)
    else:
        if not is_layer_of(center.field, E):
            raise FieldMismatch(
                "supplied splitting tower does not extend the center"
            )
        splitting = verify_splitting(mu, E, hints=hints)
    Efield = splitting.field
    gamma = automorphisms_over(
        Efield, center.field, hints=hints, expected=expected_gamma
    )
    # characters: embeddings of L into E over the center
    chars = _characters(L, Efield, center, hints)
    if not chars:
        raise ResolutionError("no embeddings of the field were found; "
                              "supply root hints")
    if iota_images is not None:
        iota = FieldMorphism(L, Efield, dict(iota_images), check=True)
        keys = {c.key(): i for i, c in enumerate(chars)}
        if iota.key() not in keys:
            raise ResolutionError(
                "the supplied embedding is not among the located "
                "characters"
            )
        iota_index = keys[iota.key()]
    else:
        iota, iota_index = chars[0], 0
    gen_elems = _tower_generators(L)
    char_sigs = {}
    for idx, g in enumerate(chars):
        sig = tuple(_elem_sort_key(g.apply(x)) for x in gen_elems)
        char_sigs[sig] = idx
    iota_gens = [iota.apply(x) for x in gen_elems]
    rho = []
    for sigma in gamma:
        sig = tuple(_elem_sort_key(sigma.apply(v)) for v in iota_gens)
        if sig not in char_sigs:
            raise ResolutionError(
                "an automorphism restricts to an unlisted character; "
                "supply root hints"
            )
        rho.append(char_sigs[sig])
    for idx in range(len(chars)):
        if idx not in rho:
            raise ResolutionError(
                "character %d has no extension in the automorphism "
                "group; the group is under-resolved" % idx
            )
    h_indices = [i for i, r in enumerate(rho) if r == iota_index]
    # orbits of characters under post-composition with the stabilizer
    roots = [g.apply(a) for g in chars]
    root_keys = {_elem_sort_key(r): i for i, r in enumerate(roots)}
    if len(root_keys) != len(chars):
        raise ResolutionError("distinct characters share a root; the "
                              "primitive element is not primitive")
    L_sub = Subfield(Efield, L, iota)
    seen = set()
    factors = []
    p = L.characteristic
    mu_L = mu.map_coeffs(L, center.embedding.apply)
    M = P.phi(a)
    kernel_dims_power1 = 0
    for idx in range(len(chars)):
        if idx in seen:
            continue
        orbit = set()
        frontier = [idx]
        while frontier:
            i = frontier.pop()
            if i in orbit:
                continue
            orbit.add(i)
            for h in h_indices:
                img = gamma[h].apply(roots[i])
                j = root_keys.get(_elem_sort_key(img))
                if j is None:
                    raise ResolutionError(
                        "stabilizer element moved a root outside the "
                        "located set"
                    )
                if j not in orbit:
                    frontier.append(j)
        seen.update(orbit)
        orbit = sorted(orbit)
        q = Polynomial.one(Efield)
        for i in orbit:
            q = q * Polynomial(Efield, [-roots[i], Efield.one()])
        e = 0
        while True:
            pulled = _pull_back_poly(q, L_sub)
            if pulled is not None:
                break
            if p == 0 or q.degree * p > n:
                raise ResolutionError(
                    "an orbit polynomial does not descend to the field; "
                    "the analysis data is inconsistent"
                )
            q = q**p
            e += 1
        mu_k = pulled
        if not (mu_L % mu_k).is_zero():
            raise ResolutionError(
                "descended factor does not divide the minimal polynomial"
            )
        N = mu_k.evaluate(
            M, lift=lambda c: Matrix.identity(L, d).scale(c)
        )
        dim1 = len(N.kernel())
        factors.append(
            [mu_k, dim1, e, [chars[i] for i in orbit], N]
        )
        kernel_dims_power1 += dim1
    semisimple = kernel_dims_power1 == d
    out_factors = []
    total = 0
    for mu_k, dim1, e, charlist, N in factors:
        if semisimple:
            dim = dim1
        else:
            dim = len((N**d).kernel())
        if dim % mu_k.degree:
            raise ResolutionError(
                "kernel dimension is not a multiple of the factor degree"
            )
        mult = dim // mu_k.degree
        total += dim
        out_factors.append(GrFactor(mu_k, mult, e, charlist))
    if total != d:
        raise ResolutionError(
            "composition factors account for %d of %d dimensions; "
            "characters are missing (supply root hints)" % (total, d)
        )
    # completeness of the character list against mu itself
    rem = mu_L
    for f in out_factors:
        while rem.degree >= f.min_poly.degree and (
            rem % f.min_poly
        ).is_zero():
            rem = rem // f.min_poly
    if rem.degree != 0:
        raise ResolutionError(
            "the located characters do not exhaust the minimal "
            "polynomial; supply root hints"
        )
    # split at the gr level: every supported factor is a twist, i.e.
    # its character maps L into iota(L), i.e. the factor has degree 1
    is_split = all(
        f.min_poly.degree == 1 for f in out_factors if f.multiplicity
    )
    h_normal = gamma.is_normal_subgroup(h_indices)
    analysis = BimoduleAnalysis(
        bimodule=P,
        center=center,
        primitive=a,
        min_poly=mu,
        splitting=splitting,
        iota=iota,
        gamma=gamma,
        h_indices=h_indices,
        factors=out_factors,
        semisimple=semisimple,
        is_split=is_split,
        h_normal=h_normal,
    )
    P._analyses[ck] = analysis
    return analysis


def _characters(L, Efield, center: Subfield, hints):
    f0 = scalar_layer(L)
    if any(layer is center.field for layer in chain(L)):
        return embeddings_over(L, Efield, center.field, hints=hints)
    raw = embeddings_over(L, Efield, f0, hints=hints)
    out = []
    cb = cached_basis(center.field, scalar_layer(center.field))
    targets = [
        (center.embed(b), Efield.coerce(b)) for b in cb
    ]
    for g in raw:
        if all(g.apply(src) == want for src, want in targets):
            out.append(g)
    return out


def _pull_back_poly(q: Polynomial, L_sub: Subfield):
    """Rewrite a monic polynomial over E with coefficients in iota(L)
    as a polynomial over L; None when a coefficient escapes."""
    coeffs = []
    for c in q.coeffs:
        pulled = subfield_coords(L_sub, c)
        if pulled is None:
            return None
        coeffs.append(pulled)
    return Polynomial(L_sub.field, coeffs)


# ----------------------------------------------- Galois property checks


def _closure_data(an: BimoduleAnalysis):
    chars = [g for f in an.factors for g in f.characters]
    mult = {}
    for f in an.factors:
        for g in f.characters:
            mult[g.key()] = f.multiplicity
    keys = {g.key(): i for i, g in enumerate(chars)}
    gen_elems = _tower_generators(an.bimodule.field)
    iota_gens = [an.iota.apply(x) for x in gen_elems]
    char_sigs = {}
    for idx, g in enumerate(chars):
        sig = tuple(_elem_sort_key(g.apply(x)) for x in gen_elems)
        char_sigs[sig] = idx
    rho = []
    for sigma in an.gamma:
        sig = tuple(_elem_sort_key(sigma.apply(v)) for v in iota_gens)
        rho.append(char_sigs[sig])
    return chars, mult, keys, rho


def is_weakly_galois(P: Bimodule, analysis=None, **kw):
    """True/False when decidable, None when the analysis cannot be
    completed with the given data (tri-state)."""
    try:
        an = analysis if analysis is not None else analyze(P, **kw)
    except ANALYSIS_OBSTRUCTIONS:
        return None
    chars, mult, keys, rho = _closure_data(an)
    supp = {i for i, g in enumerate(chars) if mult[g.key()] > 0}
    ext = {}
    for gi, ci in enumerate(rho):
        ext.setdefault(ci, []).append(gi)
    tab = an.gamma.table()
    for a in supp:
        for b in supp:
            for ga in ext[a]:
                for gb in ext[b]:
                    if rho[tab[ga][gb]] not in supp:
                        return False
    return True


def is_galois(P: Bimodule, analysis=None, **kw):
    """Tri-state like is_weakly_galois, additionally requiring constant
    multiplicities and a group-shaped support."""
    try:
        an = analysis if analysis is not None else analyze(P, **kw)
    except ANALYSIS_OBSTRUCTIONS:
        return None
    wg = is_weakly_galois(P, analysis=an)
    if not wg:
        return wg
    chars, mult, keys, rho = _closure_data(an)
    supp = {i for i, g in enumerate(chars) if mult[g.key()] > 0}
    mults = {mult[chars[i].key()] for i in supp}
    if len(mults) != 1:
        return False
    U = [gi for gi, ci in enumerate(rho) if ci in supp]
    return an.gamma.is_subgroup(U)


@dataclass
class GaloisVerdict:
    """Tri-state outcome: booleans when decided, else the obstruction
    that stopped the analysis (a DegreeBound from probing, or the
    original analysis failure)."""

    weakly_galois: object
    galois: object
    obstruction: object
    analysis: object = None   # witness data backing a decided verdict

    @property
    def decided(self):
        return self.obstruction is None


def galois_verdict(P: Bimodule, probe_cap=DEFAULT_TOWER_CAP,
                   **kw) -> GaloisVerdict:
    try:
        an = analyze(P, **kw)
    except ANALYSIS_OBSTRUCTIONS as err:
        obstruction = err
        if isinstance(err, UnsupportedBase):
            # center not linearly computable; see whether a bounded
            # splitting ladder would have resolved the spectra at all
            try:
                split_probe(P, cap=probe_cap, hints=kw.get("hints", ()))
            except (DegreeBound, ResolutionError) as probe_err:
                obstruction = probe_err
        return GaloisVerdict(None, None, obstruction)
    return GaloisVerdict(
        is_weakly_galois(P, analysis=an),
        is_galois(P, analysis=an),
        None,
        analysis=an,
    )


@dataclass
class Classification:
    """Recognition of a bimodule as r copies of the regular bimodule
    over its center."""

    center: Subfield
    degree: int          # [L : center]
    multiplicity: int    # r with the bimodule ~ r * (L (x)_F L)


def classify(P: Bimodule, analysis=None, regular_analysis=None,
             **kw) -> Classification:
    an = analysis if analysis is not None else analyze(P, **kw)
    d = P.rank
    n = an.center.degree_in_ambient()
    if d % n:
        raise ClassificationFailed(
            "rank %d is not a multiple of the center degree %d" % (d, n)
        )
    r = d // n
    if regular_analysis is None:
        reg = regular_over(P.field, an.center)
        rkw = dict(kw)
        rkw["E"] = an.splitting.field
        regular_analysis = analyze(reg, **rkw)
    reg_by_poly = {
        f.min_poly: f.multiplicity for f in regular_analysis.factors
    }
    for f in an.factors:
        want = reg_by_poly.get(f.min_poly)
        if want is None:
            raise ClassificationFailed(
                "factor %r is missing from the regular bimodule"
                % f.min_poly
            )
        if f.multiplicity != r * want:
            raise ClassificationFailed(
                "factor %r has multiplicity %d, expected %d"
                % (f.min_poly, f.multiplicity, r * want)
            )
    return Classification(center=an.center, degree=n, multiplicity=r)


@dataclass
class SplitData:
    """Splitting picture of a bimodule over its center."""

    analysis: BimoduleAnalysis
    is_split: bool
    trivial_witness: object   # column spanning a trivial subbimodule
    minimal_field: Subfield   # generated by iota(L) and supported roots
    closure_indices: tuple    # subgroup spanned by supported extensions
    h_normal_in_closure: bool


def split_analysis(P: Bimodule, analysis=None, **kw) -> SplitData:
    """Bundle the composition analysis with splitting witnesses.

    Returns a vector spanning a trivial subbimodule (nonzero whenever
    the trivial character is supported, so always for weakly Galois
    input), the subfield of the splitting tower generated by the
    embedded field together with the supported eigenvalues (computed as
    the fixed field of their joint pointwise stabilizer), the subgroup
    generated by all extensions of supported characters, and whether
    the embedded field's stabilizer is normal in that subgroup.  For
    weakly Galois bimodules the last flag agrees with is_split."""
    an = analysis if analysis is not None else analyze(P, **kw)
    L = P.field
    d = P.rank
    gens = _tower_generators(L)
    mats = [
        P.phi(g) - Matrix.identity(L, d).scale(g) for g in gens
    ]
    ker = stack_kernel(mats)
    witness = ker[0] if ker else None
    E = an.splitting.field
    targets = [an.iota.apply(x) for x in gens]
    for f in an.factors:
        if f.multiplicity:
            targets.extend(g.apply(an.primitive) for g in f.characters)
    stab = [
        sigma for sigma in an.gamma
        if all(sigma.apply(t) == t for t in targets)
    ]
    minimal = fixed_field(E, stab)
    chars, mult, keys, rho = _closure_data(an)
    supp = {i for i, g in enumerate(chars) if mult[g.key()] > 0}
    seed = [gi for gi, ci in enumerate(rho) if ci in supp]
    closure = an.gamma.subgroup_closure(
        list(seed) + list(an.h_indices)
    )
    tab = an.gamma.table()
    hset = set(an.h_indices)
    normal = all(
        tab[tab[an.gamma.inverse_index(g)][h]][g] in hset
        for g in closure
        for h in hset
    )
    return SplitData(
        analysis=an,
        is_split=an.is_split,
        trivial_witness=witness,
        minimal_field=minimal,
        closure_indices=tuple(sorted(closure)),
        h_normal_in_closure=normal,
    )


# ------------------------------------------------------- split probing


@dataclass
class ProbeResult:
    field: object
    steps: int
    resolved: bool


def split_probe(P: Bimodule, cap=DEFAULT_TOWER_CAP, max_steps=16,
                hints=()) -> ProbeResult:
    """Bounded attempt to split the right spectra of the tower
    generators by stacking binomial extensions.

    This is a conservative semi-decision procedure: the lineage
    polynomials tracked for adjoined roots are upper bounds for the
    spectra, so the probe may extend further than strictly necessary,
    but a DegreeBound raised here honestly means the ladder exceeded
    the cap without resolving."""
    L = P.field
    needed = []
    tracked = {}
    for g in _tower_generators(L):
        mu = min_poly_right(P, g)
        needed.append(mu)
        tracked[_elem_sort_key(g)] = (g, mu)
    E = L
    step = 0
    while True:
        remainings = []
        for f in needed:
            fE = f.map_coeffs(E, E.coerce) if f.field is not E else f
            rem = _scan_remaining(fE, E, hints)
            if rem.degree >= 1:
                remainings.append(rem)
        if not remainings:
            return ProbeResult(field=E, steps=step, resolved=True)
        step += 1
        if step > max_steps:
            raise ResolutionError(
                "splitting probe made no decision within %d steps"
                % max_steps
            )
        rel, lineage = _peel_binomial(remainings[0], E, tracked, hints)
        w = extend(E, rel, "q%d" % step, max_degree=cap, validate=False)
        lineage_w = lineage.map_coeffs(w, w.coerce)
        needed = [f.map_coeffs(w, w.coerce) for f in needed]
        needed.append(lineage_w)
        gen = w.coerce(w.gen())
        tracked = {
            _elem_sort_key(w.coerce(v)): (w.coerce(v),
                                          mu.map_coeffs(w, w.coerce))
            for v, mu in tracked.values()
        }
        tracked[_elem_sort_key(gen)] = (gen, lineage_w)
        E = w


def _probe_pool(E, hints):
    """Small search pool for spectrum roots: tower generators, hints,
    their negatives, and pairwise generator products."""
    gens = _tower_generators(E) + [E.coerce(h) for h in hints]
    pool = []
    for g in gens:
        pool.extend([g, -g])
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            pool.extend([g * h, -(g * h)])
    return pool


def _scan_remaining(f: Polynomial, E, hints) -> Polynomial:
    remaining = f
    for r in _probe_pool(E, hints):
        while remaining.degree >= 1 and not remaining.evaluate(r):
            remaining = remaining // Polynomial(E, [-r, E.one()])
    if remaining.degree == 1:
        return Polynomial.one(E)
    return remaining


def _peel_binomial(rem: Polynomial, E, tracked, hints):
    """Extract a binomial step x^m - c with a tracked spectrum bound
    for c from a remaining factor; returns (relation, lineage).

    The remaining polynomial is written as g(x^k) for the largest
    possible k; a located root c of g gives the candidate binomial
    x^k - c, which is then halved through located square roots as long
    as that keeps it (apparently) irreducible."""
    rem = rem.monic()
    exps = [j for j in range(1, rem.degree + 1) if rem.coeff(j)]
    k = 0
    for j in exps:
        k = _gcd(k, j)
    if k < 2:
        raise ResolutionError(
            "splitting probe only follows binomial ladders"
        )
    g = Polynomial(E, [rem.coeff(i * k) for i in range(rem.degree // k + 1)])
    if g.degree == 1:
        c = -g.coeff(0)
    else:
        c = None
        for r in _probe_pool(E, hints):
            if not g.evaluate(r):
                c = r
                break
        if c is None:
            raise ResolutionError(
                "splitting probe only follows binomial ladders"
            )
    m = k
    while m % 2 == 0 and m > 2:
        half = _scan_root_of_square(c, E, hints)
        if half is None:
            break
        m //= 2
        c = half
    # lineage: spec(phi(w))^m lands in sign * (tracked spectrum)
    for sign in (E.one(), -E.one()):
        entry = tracked.get(_elem_sort_key(sign * c))
        if entry is not None:
            _, mu_c = entry
            coeffs = {}
            for i in range(mu_c.degree + 1):
                ci = mu_c.coeff(i)
                coeffs[i * m] = ci if i % 2 == 0 else ci * sign
            lineage = Polynomial(
                E,
                [coeffs.get(j, E.zero())
                 for j in range(mu_c.degree * m + 1)],
            )
            rel = Polynomial(
                E, [-c] + [E.zero()] * (m - 1) + [E.one()]
            )
            return rel, lineage
    raise ResolutionError(
        "splitting probe cannot bound the spectrum of the required root"
    )


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _scan_root_of_square(c, E, hints):
    for r in _probe_pool(E, hints):
        if r * r == c:
            return r
    return None
