"""Field towers: rational function fields and algebraic extensions.

A tower is built bottom-up from Q or F_p, optionally through one
rational function layer, then through algebraic extension layers, each
presented by a monic relation over the layer below.  Field handles are
compared by identity: build a tower once and thread the same objects
through everything that talks about it.

Extensions validate irreducibility of the relation when the base
supports factorization and record ``validated=False`` otherwise (the
caller is then vouching for the relation, which is how externally
supplied splitting data enters).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DegreeBound,
    FieldMismatch,
    NotInvertible,
    Reducible,
    UnsupportedBase,
)
from .fieldbase import Field, PrimeField, QQ, RationalField
from .poly import (
    Polynomial,
    RationalFunction,
    format_poly,
    poly_ext_gcd,
)

DEFAULT_TOWER_CAP = 64


class RationalFunctionField(Field):
    """Field of rational functions in one variable over a coefficient
    field.  Elements are RationalFunction values owned by this handle."""

    def __init__(self, coefficient_field, var="t"):
        self.coefficient_field = coefficient_field
        self.var = var
        self.characteristic = coefficient_field.characteristic
        one_poly = Polynomial.one(coefficient_field)
        self._zero = RationalFunction(
            self, Polynomial.zero(coefficient_field), one_poly, trusted=True
        )
        self._one = RationalFunction(self, one_poly, one_poly, trusted=True)
        self._gen = RationalFunction(
            self, Polynomial.x(coefficient_field), one_poly, trusted=True
        )

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        return self._gen

    def from_int(self, n):
        return self.constant(self.coefficient_field.from_int(n))

    def constant(self, c):
        return RationalFunction(
            self,
            Polynomial.constant(self.coefficient_field, c),
            Polynomial.one(self.coefficient_field),
            trusted=True,
        )

    def from_polynomial(self, p: Polynomial):
        if p.field is not self.coefficient_field:
            p = Polynomial(self.coefficient_field, p.coeffs)
        return RationalFunction(
            self, p, Polynomial.one(self.coefficient_field), trusted=True
        )

    def from_polys(self, num: Polynomial, den: Polynomial):
        return RationalFunction(self, num, den)

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            if x.field is self:
                return x
            raise FieldMismatch("rational function from a different field")
        if isinstance(x, Polynomial) and x.field is self.coefficient_field:
            return self.from_polynomial(x)
        return self.constant(self.coefficient_field.coerce(x))

    def is_element(self, x):
        return isinstance(x, RationalFunction) and x.field is self

    def __repr__(self):
        return "%r(%s)" % (self.coefficient_field, self.var)


class ExtElement:
    """Element of an algebraic extension, stored as coordinates over the
    base in the power basis of the generator."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _lift_pair(self, other):
        """(self, other) lifted into a common field, or None.

        Same-type operands never reach Python's reflected operators, so
        an element of a deeper layer must lift itself into the higher
        field here."""
        if isinstance(other, (ExtElement, RationalFunction)):
            sf, of = self.field, other.field
            if is_layer_of(of, sf):
                return self, sf.coerce(other)
            if is_layer_of(sf, of):
                return of.coerce(self), other
            raise FieldMismatch("elements of unrelated fields")
        try:
            return self, self.field.coerce(other)
        except (FieldMismatch, TypeError):
            return None

    def __add__(self, other):
        if isinstance(other, ExtElement) and other.field is self.field:
            return ExtElement(
                self.field,
                tuple(a + b for a, b in zip(self.coords, other.coords)),
            )
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + b

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        if isinstance(other, ExtElement) and other.field is self.field:
            return ExtElement(
                self.field,
                tuple(a - b for a, b in zip(self.coords, other.coords)),
            )
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a - b

    def __rsub__(self, other):
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b - a

    def __mul__(self, other):
        if isinstance(other, ExtElement) and other.field is self.field:
            return self.field._mul(self, other)
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b

    __rmul__ = __mul__

    def inverse(self):
        return self.field._inverse(self)

    def __truediv__(self, other):
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._lift_pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ExtElement) and other.field is self.field:
            return other.coords == self.coords
        try:
            pair = self._lift_pair(other)
        except FieldMismatch:
            return False
        if pair is None:
            return NotImplemented
        a, b = pair
        return a == b

    def __hash__(self):
        return hash(("ext", self.field.var, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return format_poly(
            Polynomial(self.field.base, self.coords), self.field.var
        )


class ExtensionField(Field):
    """Algebraic extension base[x]/(relation), relation monic."""

    def __init__(self, base, relation: Polynomial, var: str, validate=True):
        if relation.field is not base:
            relation = Polynomial(base, relation.coeffs)
        relation = relation.monic()
        if relation.degree < 2:
            raise ValueError("extension relation must have degree >= 2")
        self.base = base
        self.relation = relation
        self.var = var
        self.degree = relation.degree
        self.characteristic = base.characteristic
        self.validated = False
        if validate:
            self.validated = _validate_irreducible(relation)
        d = self.degree
        zero_b = base.zero()
        one_b = base.one()
        self._zero = ExtElement(self, (zero_b,) * d)
        self._one = ExtElement(self, (one_b,) + (zero_b,) * (d - 1))
        if d >= 2:
            self._gen = ExtElement(
                self, (zero_b, one_b) + (zero_b,) * (d - 2)
            )
        # reduction rows: coordinates of gen^(d+k) for k = 0..d-2
        rows = []
        first = tuple(-relation.coeff(i) for i in range(d))
        rows.append(first)
        for _ in range(d - 2):
            prev = rows[-1]
            overflow = prev[d - 1]
            shifted = [zero_b] + list(prev[: d - 1])
            if overflow:
                shifted = [
                    s + overflow * f for s, f in zip(shifted, first)
                ]
            rows.append(tuple(shifted))
        self._reduction = rows

    # ----------------------------------------------------------- handle

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        return self._gen

    def from_int(self, n):
        return self.coerce(self.base.from_int(n))

    def coerce(self, x):
        if isinstance(x, ExtElement) and x.field is self:
            return x
        c = self.base.coerce(x)
        return ExtElement(
            self,
            (c,) + (self.base.zero(),) * (self.degree - 1),
        )

    def is_element(self, x):
        return isinstance(x, ExtElement) and x.field is self

    def from_coords(self, coords):
        coords = [self.base.coerce(c) for c in coords]
        if len(coords) > self.degree:
            raise ValueError("too many coordinates")
        coords += [self.base.zero()] * (self.degree - len(coords))
        return ExtElement(self, tuple(coords))

    def coords_of(self, x):
        return self.coerce(x).coords

    # spec-facing alias used by factorization and coordinates code
    def coords(self, x):
        return self.coords_of(x)

    def __repr__(self):
        return "%r[%s]/(%s)" % (
            self.base,
            self.var,
            format_poly(self.relation, self.var),
        )

    # ------------------------------------------------------- arithmetic

    def _mul(self, a: ExtElement, b: ExtElement):
        d = self.degree
        zero_b = self.base.zero()
        conv = [zero_b] * (2 * d - 1)
        for i, ca in enumerate(a.coords):
            if not ca:
                continue
            for j, cb in enumerate(b.coords):
                if cb:
                    conv[i + j] = conv[i + j] + ca * cb
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if not c:
                continue
            row = self._reduction[k - d]
            out = [
                o + c * r if r else o for o, r in zip(out, row)
            ]
        return ExtElement(self, tuple(out))

    def _inverse(self, a: ExtElement):
        if not a:
            raise NotInvertible("division by zero in %r" % self)
        poly_a = Polynomial(self.base, a.coords)
        d, s, _t = poly_ext_gcd(poly_a, self.relation)
        if not d.is_one():
            raise NotInvertible(
                "element shares a factor with the relation (relation "
                "reducible?)"
            )
        s = s % self.relation
        return self.from_coords(list(s.coeffs))

    # ------------------------------------------------- finite field hooks

    @property
    def finite_size(self):
        base_size = getattr(self.base, "finite_size", None)
        if base_size is None:
            return None
        return base_size**self.degree

    def element_from_index(self, k):
        base_size = self.base.finite_size
        coords = []
        for _ in range(self.degree):
            coords.append(self.base.element_from_index(k % base_size))
            k //= base_size
        return ExtElement(self, tuple(coords))

    def pth_root(self, x):
        q = self.finite_size
        if q is None:
            raise UnsupportedBase("p-th roots need a finite field")
        return self.coerce(x) ** (q // self.characteristic)

    def elements(self):
        q = self.finite_size
        if q is None:
            raise UnsupportedBase("cannot enumerate an infinite field")
        for k in range(q):
            yield self.element_from_index(k)


def _validate_irreducible(relation: Polynomial) -> bool:
    """True if verified irreducible; False if the base does not support
    factorization (caller vouches); raises Reducible when it factors."""
    from .factor import factor_poly

    try:
        _, factors = factor_poly(
            relation, max_degree=max(relation.degree, 1)
        )
    except UnsupportedBase:
        return False
    if len(factors) != 1 or factors[0][1] != 1:
        raise Reducible(
            "relation %s factors over the base" % format_poly(relation, "x")
        )
    return True


def extend(base, relation, var, max_degree=DEFAULT_TOWER_CAP, validate=True):
    """Adjoin a root of a monic relation; raises Reducible when the
    relation detectably factors and DegreeBound when the tower's total
    algebraic degree would exceed the cap."""
    if not isinstance(relation, Polynomial):
        relation = Polynomial(base, relation)
    total = relation.degree
    layer = base
    while isinstance(layer, ExtensionField):
        total *= layer.degree
        layer = layer.base
    if total > max_degree:
        raise DegreeBound(
            "tower degree %d exceeds the cap %d" % (total, max_degree)
        )
    return ExtensionField(base, relation, var, validate=validate)


# ------------------------------------------------------------ navigation


def chain(field):
    """Layers from the bottom field up to (and including) ``field``."""
    layers = [field]
    seen = field
    while True:
        if isinstance(seen, ExtensionField):
            seen = seen.base
        elif isinstance(seen, RationalFunctionField):
            seen = seen.coefficient_field
        else:
            break
        layers.append(seen)
    layers.reverse()
    return layers


def is_layer_of(sub, field) -> bool:
    return any(layer is sub for layer in chain(field))


def algebraic_degree(field, down_to) -> int:
    """Product of extension degrees from ``down_to`` up to ``field``;
    refuses towers with a rational function layer strictly between."""
    if field is down_to:
        return 1
    if isinstance(field, ExtensionField):
        return field.degree * algebraic_degree(field.base, down_to)
    if isinstance(field, RationalFunctionField):
        raise UnsupportedBase(
            "a rational function layer sits between the two fields"
        )
    raise FieldMismatch("%r is not a layer of the tower" % (down_to,))


def tower_basis(field, down_to):
    """Multiplicative basis of ``field`` over the sublayer ``down_to``,
    ordered to match ``coords_over``."""
    if field is down_to:
        return [field.one()]
    if not isinstance(field, ExtensionField):
        raise FieldMismatch("%r is not a layer of the tower" % (down_to,))
    below = tower_basis(field.base, down_to)
    gen = field.gen()
    out = []
    power = field.one()
    for _j in range(field.degree):
        for b in below:
            out.append(power * field.coerce(b))
        power = power * gen
    return out


def coords_over(field, x, down_to):
    """Coordinates of ``x`` in ``tower_basis(field, down_to)``."""
    if field is down_to:
        return [field.coerce(x)]
    if not isinstance(field, ExtensionField):
        raise FieldMismatch("%r is not a layer of the tower" % (down_to,))
    x = field.coerce(x)
    out = []
    for c in x.coords:
        out.extend(coords_over(field.base, c, down_to))
    return out


def from_coords_over(field, coords, down_to):
    if field is down_to:
        if len(coords) != 1:
            raise ValueError("expected a single coordinate")
        return field.coerce(coords[0])
    if not isinstance(field, ExtensionField):
        raise FieldMismatch("%r is not a layer of the tower" % (down_to,))
    step = len(coords) // field.degree
    parts = []
    for j in range(field.degree):
        parts.append(
            from_coords_over(field.base, coords[j * step : (j + 1) * step], down_to)
        )
    return field.from_coords(parts)


# ----------------------------------------------------------- cyclotomics


def cyclotomic_polynomial(n: int, field=QQ) -> Polynomial:
    """n-th cyclotomic polynomial over the rationals (or mapped into
    another field), by the quotient recurrence."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num = Polynomial(QQ, [-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = num // cyclotomic_polynomial(d)
    if field is QQ:
        return num
    return num.map_coeffs(field, field.coerce)
