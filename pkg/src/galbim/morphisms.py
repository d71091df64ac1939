"""Field morphisms between towers and automorphism groups.

A morphism is stored as one image per tower layer (the generator image
for algebraic layers, the variable image for rational function layers);
everything at or below the fixed region maps canonically.  Application
is structural recursion over the domain tower.  Composition reads left
to right: (f * g)(x) = g(f(x)).

Automorphism enumeration works by backtracking over layer generators:
candidate images are drawn from a finite pool (tower generators, their
negatives, supplied hints, two rounds of pairwise products, and a
sum-of-roots completion), filtered by the mapped relation at each node.
When the caller states an expected order and fewer maps are found, the
search reports failure rather than returning a silently partial group.
"""

from __future__ import annotations

from .errors import (
    ClosureBound,
    FieldMismatch,
    NotAHomomorphism,
    NotASubgroup,
    ResolutionError,
    UnsupportedBase,
)
from .factor import _elem_sort_key, roots_in_coefficient_field
from .poly import Polynomial
from .towers import (
    ExtensionField,
    RationalFunctionField,
    chain,
    is_layer_of,
)

CLOSURE_BOUND = 1024


class FieldMorphism:
    __slots__ = ("domain", "codomain", "images", "_key")

    def __init__(self, domain, codomain, images, check=True):
        self.domain = domain
        self.codomain = codomain
        fixed = {}
        for layer in chain(domain):
            if isinstance(layer, (ExtensionField, RationalFunctionField)):
                if layer in images:
                    fixed[layer] = codomain.coerce(images[layer])
                elif is_layer_of(layer, codomain):
                    # canonical image: the same generator, lifted
                    gen = (
                        layer.gen()
                        if isinstance(layer, ExtensionField)
                        else layer.gen()
                    )
                    fixed[layer] = codomain.coerce(gen)
                else:
                    raise NotAHomomorphism(
                        "no image supplied for layer %r" % (layer,)
                    )
        self.images = fixed
        self._key = None
        if check:
            self._verify()

    def _verify(self):
        for layer in chain(self.domain):
            if not isinstance(layer, ExtensionField):
                continue
            img = self.images[layer]
            rel = layer.relation
            acc = self.codomain.coerce(
                self._apply(rel.leading(), layer.base)
            )
            for j in range(rel.degree - 1, -1, -1):
                acc = acc * img + self._apply(rel.coeff(j), layer.base)
            if acc:
                raise NotAHomomorphism(
                    "image of %s does not satisfy its relation" % layer.var
                )

    def apply(self, x):
        return self._apply(x, self.domain)

    def _apply(self, x, layer):
        if isinstance(layer, ExtensionField):
            x = layer.coerce(x)
            img = self.images[layer]
            acc = self.codomain.coerce(
                self._apply(x.coords[-1], layer.base)
            )
            for c in reversed(x.coords[:-1]):
                acc = acc * img + self._apply(c, layer.base)
            return acc
        if isinstance(layer, RationalFunctionField):
            x = layer.coerce(x)
            img = self.images[layer]
            num = self._eval_poly(x.num, img, layer.coefficient_field)
            den = self._eval_poly(x.den, img, layer.coefficient_field)
            if not den:
                raise NotAHomomorphism(
                    "variable image makes a denominator vanish"
                )
            return num / den
        return self.codomain.coerce(x)

    def _eval_poly(self, p, at, coeff_layer):
        acc = self.codomain.coerce(self._apply(p.leading(), coeff_layer))
        for j in range(p.degree - 1, -1, -1):
            acc = acc * at + self._apply(p.coeff(j), coeff_layer)
        return acc

    def key(self):
        if self._key is None:
            self._key = tuple(
                _elem_sort_key(self.images[layer])
                for layer in chain(self.domain)
                if isinstance(layer, (ExtensionField, RationalFunctionField))
            )
        return self._key

    def __mul__(self, other):
        """Left-to-right composition: (self * other)(x) = other(self(x))."""
        if not isinstance(other, FieldMorphism):
            return NotImplemented
        if other.domain is not self.codomain:
            raise FieldMismatch("composition domain mismatch")
        images = {
            layer: other.apply(img) for layer, img in self.images.items()
        }
        return FieldMorphism(self.domain, other.codomain, images, check=False)

    def is_identity(self):
        if self.domain is not self.codomain:
            return False
        for layer, img in self.images.items():
            if img != self.codomain.coerce(layer.gen()):
                return False
        return True

    def fixes(self, x):
        return self.apply(x) == self.codomain.coerce(x)

    def __eq__(self, other):
        return (
            isinstance(other, FieldMorphism)
            and other.domain is self.domain
            and other.codomain is self.codomain
            and other.key() == self.key()
        )

    def __hash__(self):
        return hash(("morphism", self.key()))

    def __repr__(self):
        parts = []
        for layer in chain(self.domain):
            if isinstance(layer, (ExtensionField, RationalFunctionField)):
                parts.append("%s -> %r" % (layer.var, self.images[layer]))
        return "{%s}" % ", ".join(parts)


def identity_morphism(field):
    return FieldMorphism(field, field, {}, check=False)


def inclusion_morphism(sub, field):
    if not is_layer_of(sub, field):
        raise FieldMismatch("%r is not a layer of %r" % (sub, field))
    return FieldMorphism(sub, field, {}, check=False)


class AutomorphismGroup:
    """A finite, composition-closed set of automorphisms of one field.

    Elements are indexed; the identity sits at index 0 and the rest are
    sorted by a deterministic structural key, so indices are stable."""

    def __init__(self, field, morphisms):
        self.field = field
        seen = {}
        for m in morphisms:
            if m.domain is not field or m.codomain is not field:
                raise FieldMismatch("automorphisms of a different field")
            seen.setdefault(m.key(), m)
        elements = sorted(seen.values(), key=lambda m: m.key())
        elements.sort(key=lambda m: not m.is_identity())
        if not elements or not elements[0].is_identity():
            elements.insert(0, identity_morphism(field))
        self.elements = elements
        self._index = {m.key(): i for i, m in enumerate(elements)}
        self._table = None
        self._inverses = None

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, m: FieldMorphism) -> int:
        key = m.key()
        if key not in self._index:
            raise NotASubgroup("morphism is not in the group")
        return self._index[key]

    def table(self):
        """table[i][j] = index of elements[i] * elements[j]."""
        if self._table is None:
            tab = []
            for a in self.elements:
                row = []
                for b in self.elements:
                    prod = (a * b).key()
                    if prod not in self._index:
                        raise NotASubgroup(
                            "set of automorphisms is not closed under "
                            "composition"
                        )
                    row.append(self._index[prod])
                tab.append(row)
            self._table = tab
        return self._table

    def inverse_index(self, i: int) -> int:
        if self._inverses is None:
            tab = self.table()
            inv = [None] * len(self.elements)
            for a in range(len(self.elements)):
                for b in range(len(self.elements)):
                    if tab[a][b] == 0:
                        inv[a] = b
                        break
            self._inverses = inv
        return self._inverses[i]

    def compose(self, i: int, j: int) -> int:
        return self.table()[i][j]

    def is_abelian(self):
        tab = self.table()
        n = len(self.elements)
        return all(
            tab[i][j] == tab[j][i] for i in range(n) for j in range(i)
        )

    def subgroup_closure(self, indices, bound=CLOSURE_BOUND):
        tab = self.table()
        out = {0}
        out.update(indices)
        frontier = list(out)
        while frontier:
            new = []
            for i in frontier:
                for j in list(out):
                    for k in (tab[i][j], tab[j][i]):
                        if k not in out:
                            out.add(k)
                            new.append(k)
                if len(out) > bound:
                    raise ClosureBound(
                        "subgroup closure exceeded %d elements" % bound
                    )
            frontier = new
        return sorted(out)

    def is_subgroup(self, indices) -> bool:
        s = set(indices)
        if 0 not in s:
            return False
        tab = self.table()
        return all(
            tab[i][j] in s and tab[i][self.inverse_index(j)] in s
            for i in s
            for j in s
        )

    def is_normal_subgroup(self, indices) -> bool:
        if not self.is_subgroup(indices):
            raise NotASubgroup("index set is not a subgroup")
        s = set(indices)
        tab = self.table()
        for g in range(len(self.elements)):
            gi = self.inverse_index(g)
            for h in s:
                if tab[tab[gi][h]][g] not in s:
                    return False
        return True

    def left_cosets(self, indices):
        """Partition of the group into left cosets g*H of the subgroup."""
        s = sorted(set(indices))
        tab = self.table()
        seen = set()
        cosets = []
        for g in range(len(self.elements)):
            if g in seen:
                continue
            coset = sorted(tab[g][h] for h in s)
            seen.update(coset)
            cosets.append(coset)
        return cosets

    def orbit(self, x):
        """Distinct images of a field element under the group."""
        out = []
        seen = set()
        for m in self.elements:
            y = m.apply(x)
            k = _elem_sort_key(y)
            if k not in seen:
                seen.add(k)
                out.append(y)
        return out

    def pointwise_stabilizer(self, xs):
        return [
            i
            for i, m in enumerate(self.elements)
            if all(m.fixes(x) for x in xs)
        ]


# ------------------------------------------------------------ enumeration


def _candidate_pool(field, hints):
    gens = []
    for layer in chain(field):
        if isinstance(layer, ExtensionField):
            gens.append(field.coerce(layer.gen()))
    pool = {}

    def add(x):
        k = _elem_sort_key(x)
        if k not in pool:
            pool[k] = x

    for g in gens:
        add(g)
        add(-g)
    for h in hints:
        h = field.coerce(h)
        add(h)
        add(-h)
    # two rounds of products against the generators
    for _ in range(2):
        current = list(pool.values())
        for a in current:
            for g in gens:
                if len(pool) >= 4000:
                    break
                p = a * g
                add(p)
                add(-p)
    return list(pool.values())


def _enumerate_maps(domain, codomain, fixed, hints):
    layers = chain(domain)
    if not any(layer is fixed for layer in layers):
        raise FieldMismatch("fixed field is not a layer of the tower")
    if domain is not codomain and not is_layer_of(fixed, codomain):
        raise FieldMismatch("fixed field is not shared with the codomain")
    above = []
    seen_fixed = False
    for layer in layers:
        if layer is fixed:
            seen_fixed = True
            continue
        if not seen_fixed:
            continue
        if isinstance(layer, RationalFunctionField):
            raise UnsupportedBase(
                "cannot enumerate morphisms across a transcendental layer"
            )
        above.append(layer)
    pool = _candidate_pool(codomain, hints)
    found = []

    def partial_apply(x, layer, images):
        if isinstance(layer, ExtensionField) and layer in images:
            x = layer.coerce(x)
            img = images[layer]
            acc = partial_apply(x.coords[-1], layer.base, images)
            acc = codomain.coerce(acc)
            for c in reversed(x.coords[:-1]):
                acc = acc * img + partial_apply(c, layer.base, images)
            return acc
        # at or below the fixed layer: canonical embedding
        return codomain.coerce(x)

    def place(idx, images):
        if idx == len(above):
            found.append(
                FieldMorphism(domain, codomain, dict(images), check=True)
            )
            return
        layer = above[idx]
        rel = layer.relation
        mapped = [
            partial_apply(rel.coeff(j), layer.base, images)
            for j in range(rel.degree + 1)
        ]
        roots = []
        seen_rk = set()
        for r in pool:
            acc = codomain.coerce(mapped[-1])
            for j in range(rel.degree - 1, -1, -1):
                acc = acc * r + mapped[j]
            if not acc:
                k = _elem_sort_key(r)
                if k not in seen_rk:
                    seen_rk.add(k)
                    roots.append(r)
        if len(roots) == rel.degree - 1:
            # sum of roots completes the last one; verify before use
            cand = -mapped[rel.degree - 1]
            for r in roots:
                cand = cand - r
            acc = codomain.coerce(mapped[-1])
            for j in range(rel.degree - 1, -1, -1):
                acc = acc * cand + mapped[j]
            if not acc:
                k = _elem_sort_key(cand)
                if k not in seen_rk:
                    seen_rk.add(k)
                    roots.append(cand)
        if len(roots) < rel.degree:
            # pool missed some root; fall back to real factorization
            # where the codomain supports it
            try:
                located = roots_in_coefficient_field(
                    Polynomial(codomain, mapped)
                )
            except UnsupportedBase:
                located = []
            for r, _mult in located:
                k = _elem_sort_key(r)
                if k not in seen_rk:
                    seen_rk.add(k)
                    roots.append(r)
        for r in roots:
            images[layer] = r
            place(idx + 1, images)
            del images[layer]

    place(0, {})
    return found


def automorphisms_over(field, fixed, hints=(), expected=None):
    """All automorphisms of ``field`` fixing the layer ``fixed``
    pointwise, as an AutomorphismGroup.

    Raises ResolutionError when an expected order is stated and the
    candidate pool fails to realize it (the caller should then supply
    more root hints)."""
    found = _enumerate_maps(field, field, fixed, hints)
    group = AutomorphismGroup(field, found)
    if expected is not None and group.order != expected:
        raise ResolutionError(
            "found %d automorphisms but expected %d; supply root hints"
            % (group.order, expected)
        )
    return group


def embeddings_over(domain, codomain, fixed, hints=(), expected=None):
    """All field maps domain -> codomain fixing the shared layer
    ``fixed`` pointwise, sorted by structural key."""
    found = _enumerate_maps(domain, codomain, fixed, hints)
    seen = {}
    for m in found:
        seen.setdefault(m.key(), m)
    out = sorted(seen.values(), key=lambda m: m.key())
    if expected is not None and len(out) != expected:
        raise ResolutionError(
            "found %d embeddings but expected %d; supply root hints"
            % (len(out), expected)
        )
    return out
