"""Dense univariate polynomials and rational functions.

Coefficients live in a single field handle carried by the container;
they are stored low degree first and trimmed.  The zero polynomial has
degree -1.  Rational functions keep a monic denominator coprime to the
numerator; operations take fast paths while denominators are 1 so that
polynomial-only computations never pay for gcds.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatch, NotInvertible, UnsupportedBase
from .fieldbase import QQ


class Polynomial:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs, trusted=False):
        if not trusted:
            coeffs = [field.coerce(c) for c in coeffs]
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            coeffs = tuple(coeffs)
        self.field = field
        self.coeffs = coeffs

    # ------------------------------------------------------------ basics

    @staticmethod
    def zero(field):
        return Polynomial(field, (), trusted=True)

    @staticmethod
    def one(field):
        return Polynomial(field, (field.one(),), trusted=True)

    @staticmethod
    def x(field):
        return Polynomial(field, (field.zero(), field.one()), trusted=True)

    @staticmethod
    def constant(field, c):
        c = field.coerce(c)
        if not c:
            return Polynomial.zero(field)
        return Polynomial(field, (c,), trusted=True)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one()

    def leading(self):
        if not self.coeffs:
            return self.field.zero()
        return self.coeffs[-1]

    def constant_term(self):
        if not self.coeffs:
            return self.field.zero()
        return self.coeffs[0]

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero()

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.field is not self.field:
                raise FieldMismatch("polynomials over different fields")
            return other
        try:
            return Polynomial.constant(self.field, other)
        except (FieldMismatch, TypeError):
            return None

    # -------------------------------------------------------- arithmetic

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        while out and not out[-1]:
            out.pop()
        return Polynomial(self.field, tuple(out), trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(
            self.field, tuple(-c for c in self.coeffs), trusted=True
        )

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = out[i + j] + ca * cb
        while out and not out[-1]:
            out.pop()
        return Polynomial(self.field, tuple(out), trusted=True)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.field.coerce(c)
        if not c:
            return Polynomial.zero(self.field)
        return Polynomial(
            self.field, tuple(c * a for a in self.coeffs), trusted=True
        )

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def divmod(self, other):
        other = self._check(other)
        if other is None or other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Polynomial.zero(self.field), self
        zero = self.field.zero()
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        quo = [zero] * (dq + 1)
        inv_lead = self.field.one() / other.leading()
        oc = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[other.degree + k]
            if not c:
                continue
            q = c * inv_lead
            quo[k] = q
            for j, b in enumerate(oc):
                if b:
                    rem[j + k] = rem[j + k] - q * b
        while rem and not rem[-1]:
            rem.pop()
        return (
            Polynomial(self.field, tuple(quo), trusted=True),
            Polynomial(self.field, tuple(rem), trusted=True),
        )

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == self.field.one():
            return self
        inv = self.field.one() / lead
        return self.scale(inv)

    def derivative(self):
        if len(self.coeffs) <= 1:
            return Polynomial.zero(self.field)
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(self.field.from_int(i) * self.coeffs[i])
        while out and not out[-1]:
            out.pop()
        return Polynomial(self.field, tuple(out), trusted=True)

    def evaluate(self, x, lift=None):
        """Horner evaluation at ``x`` in any commutative ring.

        ``lift`` maps a coefficient into that ring (defaults to
        identity, which works when ``x`` lives in the coefficient
        field itself)."""
        if lift is None:
            lift = lambda c: c
        if not self.coeffs:
            return lift(self.field.zero())
        acc = lift(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + lift(c)
        return acc

    def compose(self, inner):
        """self(inner) for another polynomial over the same field."""
        acc = Polynomial.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.constant(self.field, c)
        return acc

    def map_coeffs(self, field, fn):
        return Polynomial(field, [fn(c) for c in self.coeffs])

    def shift_degree(self, k):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        zero = self.field.zero()
        return Polynomial(
            self.field, (zero,) * k + self.coeffs, trusted=True
        )

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash(("poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return format_poly(self, "x")


def format_poly(p: Polynomial, var: str) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if not c:
            continue
        cs = str(c)
        if i == 0:
            parts.append(cs)
        else:
            xs = var if i == 1 else "%s^%d" % (var, i)
            if cs == "1":
                parts.append(xs)
            elif cs == "-1":
                parts.append("-" + xs)
            else:
                if any(op in cs for op in "+-") and not cs.startswith("-"):
                    cs = "(" + cs + ")"
                elif cs.startswith("-") and any(op in cs[1:] for op in "+-"):
                    cs = "(" + cs + ")"
                parts.append("%s*%s" % (cs, xs))
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


# ---------------------------------------------------------------- gcds


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm."""
    if f.field is not g.field:
        raise FieldMismatch("gcd of polynomials over different fields")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def poly_ext_gcd(f, g):
    """(d, s, t) with s f + t g = d, d monic (or zero)."""
    field = f.field
    a, b = f, g
    sa, sb = Polynomial.one(field), Polynomial.zero(field)
    ta, tb = Polynomial.zero(field), Polynomial.one(field)
    while not b.is_zero():
        q, r = a.divmod(b)
        a, b = b, r
        sa, sb = sb, sa - q * sb
        ta, tb = tb, ta - q * tb
    if a.is_zero():
        return a, sa, ta
    lead = a.leading()
    inv = field.one() / lead
    return a.scale(inv), sa.scale(inv), ta.scale(inv)


def poly_lcm(f, g):
    if f.is_zero() or g.is_zero():
        return Polynomial.zero(f.field)
    return ((f * g) // poly_gcd(f, g)).monic()


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of f (monic).

    In characteristic p, if f' == 0 then f = g(x^p); recurse on the
    p-th root exponent pattern.
    """
    if f.is_zero() or f.is_constant():
        return Polynomial.one(f.field)
    d = f.derivative()
    if d.is_zero():
        # f = g(x^p); over a perfect field f = h(x)^p with h carrying the
        # p-th roots of g's coefficients.  Imperfect fields have no such
        # h and the notion needs the caller's inseparability handling.
        p = f.field.characteristic
        root = getattr(f.field, "pth_root", None)
        if root is None:
            raise UnsupportedBase(
                "squarefree part of an inseparable polynomial over an "
                "imperfect field"
            )
        coeffs = [root(f.coeffs[i]) for i in range(0, len(f.coeffs), p)]
        return squarefree_part(Polynomial(f.field, coeffs))
    g = poly_gcd(f, d)
    sf = (f // g).monic()
    if g.is_constant():
        return sf
    # factors of f killed in f//g by multiplicity p need recovering
    rest = squarefree_part(g)
    extra = (rest // poly_gcd(rest, sf)).monic()
    return (sf * extra).monic()


def squarefree_decomposition(f: Polynomial):
    """(lead, [(g_i, m_i)]) with f = lead * prod g_i^{m_i}, each g_i
    squarefree monic and the multiplicities distinct.

    Uses the gcd-quotient recurrence, which is characteristic-uniform:
    whatever remains with zero derivative is a p-th power and recurses
    through deflation (perfect coefficient fields only).
    """
    field = f.field
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    lead = f.leading()
    f = f.monic()
    out = {}
    p = field.characteristic

    def run(h, mult):
        if h.is_constant():
            return
        d = h.derivative()
        if not d.is_zero():
            g = poly_gcd(h, d)
            w = (h // g).monic()
            i = 1
            while not w.is_constant():
                y = poly_gcd(w, g)
                z = (w // y).monic()
                if not z.is_constant():
                    key = mult * i
                    out[key] = (out[key] * z).monic() if key in out else z
                g = (g // y).monic()
                w = y
                i += 1
        else:
            g = h
        if not g.is_constant():
            # g is a polynomial in x^p with zero derivative
            root = getattr(field, "pth_root", None)
            if root is None:
                raise UnsupportedBase(
                    "squarefree decomposition of an inseparable polynomial "
                    "over an imperfect field"
                )
            coeffs = [root(g.coeffs[i]) for i in range(0, len(g.coeffs), p)]
            run(Polynomial(field, coeffs).monic(), mult * p)

    run(f, 1)
    return lead, [(g, m) for m, g in sorted(out.items())]


def poly_pow_mod(base: Polynomial, n: int, modulus: Polynomial) -> Polynomial:
    result = Polynomial.one(base.field)
    base = base % modulus
    while n:
        if n & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        n >>= 1
    return result


def resultant(f: Polynomial, g: Polynomial):
    """Resultant over a field via the Euclidean recurrence."""
    field = f.field
    one = field.one()
    if f.is_zero() or g.is_zero():
        return field.zero()
    sign = one
    acc = one
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return field.zero()
        if (a.degree * b.degree) % 2 == 1:
            sign = -sign
        lb = b.leading()
        acc = acc * _power(lb, a.degree - r.degree, one)
        a, b = b, r
    # b is a nonzero constant
    acc = acc * _power(b.leading(), a.degree, one)
    return sign * acc


def _power(c, n, one):
    out = one
    for _ in range(n):
        out = out * c
    return out


def qbinom(n: int, i: int, q):
    """Gaussian binomial coefficient [n choose i]_q.

    q may be an int, Fraction or any field element; the result has the
    same type.  Built from the q-Pascal recurrence
    [n i] = [n-1 i-1] + q^i [n-1 i].
    """
    if i < 0 or i > n:
        raise ValueError("q-binomial index out of range")
    one = 1 if isinstance(q, int) else q ** 0
    row = [one]
    for m in range(1, n + 1):
        new = [one]
        qpow = one
        for j in range(1, m):
            qpow = qpow * q
            new.append(row[j - 1] + qpow * row[j])
        new.append(one)
        row = new
    return row[i]


# ------------------------------------------------------ rational functions


class RationalFunction:
    """num/den over a coefficient field; den monic and coprime to num.

    The ``field`` slot points to the owning RationalFunctionField (an
    opaque handle here; the class only needs the coefficient field that
    the numerator carries).
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, trusted=False):
        if not trusted:
            num, den = _normalize_ratfunc(num, den)
        self.field = field
        self.num = num
        self.den = den

    def _check(self, other):
        if isinstance(other, RationalFunction):
            if other.field is not self.field:
                raise FieldMismatch("rational functions over different fields")
            return other
        try:
            c = self.num.field.coerce(other)
        except (FieldMismatch, TypeError):
            return None
        return RationalFunction(
            self.field,
            Polynomial.constant(self.num.field, c),
            Polynomial.one(self.num.field),
            trusted=True,
        )

    def is_polynomial(self):
        return self.den.is_one()

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(
                self.field, self.num + other.num, self.den, trusted=True
            )
        num = self.num * other.den + other.num * self.den
        den = self.den * other.den
        return RationalFunction(self.field, num, den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return self.field.zero()
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(
                self.field, self.num * other.num, self.den, trusted=True
            )
        # cross-reduce before multiplying to keep degrees small
        a, d2 = _cross_reduce(self.num, other.den)
        b, d1 = _cross_reduce(other.num, self.den)
        return RationalFunction(self.field, a * b, d1 * d2, trusted=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise NotInvertible("division by zero rational function")
        num, den = self.den, self.num
        scale = self.num.field.one() / den.leading()
        return RationalFunction(
            self.field, num.scale(scale), den.scale(scale), trusted=True
        )

    def __truediv__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

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
        if isinstance(other, RationalFunction):
            return (
                other.field is self.field
                and other.num == self.num
                and other.den == self.den
            )
        checked = self._check(other)
        if checked is None:
            return NotImplemented
        return self == checked

    def __hash__(self):
        return hash(("ratfunc", self.num.coeffs, self.den.coeffs))

    def __bool__(self):
        return bool(self.num.coeffs)

    def __repr__(self):
        var = getattr(self.field, "var", "t")
        ns = format_poly(self.num, var)
        if self.den.is_one():
            return ns
        ds = format_poly(self.den, var)
        return "(%s)/(%s)" % (ns, ds)


def _normalize_ratfunc(num, den):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return num, Polynomial.one(den.field)
    if not den.is_one():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num // g
            den = den // g
        lead = den.leading()
        if lead != den.field.one():
            inv = den.field.one() / lead
            num = num.scale(inv)
            den = den.scale(inv)
    return num, den


def _cross_reduce(num, den):
    if den.is_one() or num.is_zero():
        return num, den
    g = poly_gcd(num, den)
    if g.is_constant():
        return num, den
    return num // g, den // g
