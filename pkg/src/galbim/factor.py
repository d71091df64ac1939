"""Polynomial factorization over the supported coefficient fields.

Routes by field:

* prime fields and finite extension towers: distinct-degree splitting
  plus Cantor-Zassenhaus equal-degree splitting with a seeded generator,
  so results are deterministic run to run;
* the rationals: squarefree decomposition, reduction mod a good prime,
  Hensel lifting and subset recombination against a Landau-Mignotte
  bound;
* algebraic extension towers over the rationals: Trager's norm descent
  (resultant against the generator's minimal polynomial, factor the
  norm one level down, pull factors back through gcds).

Coefficient fields containing a rational function field are refused
with UnsupportedBase: factorization there is not part of the kernel
contract, and callers supply splitting data instead.  Inputs above the
degree cap raise DegreeBound.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import DegreeBound, UnsupportedBase
from .fieldbase import GF, QQ, PrimeField, RationalField
from .poly import (
    Polynomial,
    RationalFunction,
    poly_ext_gcd,
    poly_gcd,
    poly_pow_mod,
    resultant,
    squarefree_decomposition,
)

DEFAULT_DEGREE_CAP = 24


def factor_poly(f: Polynomial, max_degree: int = DEFAULT_DEGREE_CAP, seed: int = 0):
    """(leading coefficient, [(monic irreducible, multiplicity), ...]).

    Factors are sorted by degree, then by a deterministic coefficient
    key, so output order is stable.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > max_degree:
        raise DegreeBound(
            "degree %d exceeds the factorization cap %d"
            % (f.degree, max_degree)
        )
    lead = f.leading()
    if f.is_constant():
        return lead, []
    field = f.field
    kind = _field_kind(field)
    if kind == "ratfunc":
        raise UnsupportedBase(
            "factorization over a rational function field is not supported; "
            "supply splitting data instead"
        )
    _, squarefree = squarefree_decomposition(f)
    out = []
    for g, mult in squarefree:
        if kind == "finite":
            parts = _factor_finite_squarefree(g, seed)
        elif kind == "rational":
            parts = _factor_rational_squarefree(g)
        else:
            parts = _factor_tower_squarefree(g, max_degree, seed)
        out.extend((h, mult) for h in parts)
    out.sort(key=lambda pair: _poly_sort_key(pair[0]))
    return lead, out


def is_irreducible(f: Polynomial, max_degree: int = DEFAULT_DEGREE_CAP, seed: int = 0) -> bool:
    if f.degree < 1:
        return False
    _, factors = factor_poly(f, max_degree=max_degree, seed=seed)
    return len(factors) == 1 and factors[0][1] == 1


def roots_in_coefficient_field(f: Polynomial, max_degree: int = DEFAULT_DEGREE_CAP, seed: int = 0):
    """Roots of f inside its own coefficient field, with multiplicity."""
    _, factors = factor_poly(f, max_degree=max_degree, seed=seed)
    out = []
    for g, mult in factors:
        if g.degree == 1:
            out.append((-g.coeff(0), mult))
    return out


def _field_kind(field):
    """'finite', 'rational', 'tower' (over Q), or 'ratfunc' anywhere."""
    seen = field
    while True:
        if isinstance(seen, PrimeField):
            return "finite"
        if isinstance(seen, RationalField):
            return "rational" if seen is field else "tower"
        if getattr(seen, "coefficient_field", None) is not None:
            # a rational function layer anywhere poisons factorization
            return "ratfunc"
        base = getattr(seen, "base", None)
        if base is None:
            raise UnsupportedBase("unrecognized coefficient field %r" % (field,))
        seen = base


def _poly_sort_key(g: Polynomial):
    return (g.degree, tuple(_elem_sort_key(c) for c in g.coeffs))


def _elem_sort_key(c):
    # deterministic total order on the element kinds we print
    if isinstance(c, Fraction):
        return (0, c.numerator, c.denominator)
    value = getattr(c, "value", None)
    if isinstance(value, int):
        return (1, value)
    coords = getattr(c, "coords", None)
    if coords is not None:
        return (2, tuple(_elem_sort_key(x) for x in coords))
    if isinstance(c, RationalFunction):
        return (
            3,
            tuple(_elem_sort_key(x) for x in c.num.coeffs),
            tuple(_elem_sort_key(x) for x in c.den.coeffs),
        )
    return (9, repr(c))


# ----------------------------------------------------------- finite fields


def _finite_size(field):
    size = getattr(field, "finite_size", None)
    if size is None:
        raise UnsupportedBase("field %r is not finite" % (field,))
    return size


def _random_poly(field, degree, rng):
    q = _finite_size(field)
    coeffs = [field.element_from_index(rng.randrange(q)) for _ in range(degree + 1)]
    return Polynomial(field, coeffs)


def _factor_finite_squarefree(f: Polynomial, seed: int):
    """Irreducible factors of a squarefree monic f over a finite field."""
    field = f.field
    q = _finite_size(field)
    f = f.monic()
    rng = random.Random(seed * 1000003 + q * 1009 + f.degree)
    out = []
    # distinct-degree splitting: strip factors of degree d for d = 1, 2, ...
    x = Polynomial.x(field)
    w = x
    d = 0
    rest = f
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append(rest)
            break
        w = poly_pow_mod(w, q, rest)
        g = poly_gcd(w - x, rest)
        if g.is_constant():
            continue
        out.extend(_equal_degree_split(g, d, q, rng))
        rest = (rest // g).monic()
        w = w % rest
    return out


def _equal_degree_split(f: Polynomial, d: int, q: int, rng):
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    if f.degree == d:
        return [f.monic()]
    field = f.field
    one = Polynomial.one(field)
    while True:
        r = _random_poly(field, f.degree - 1, rng)
        if r.is_constant():
            continue
        if q % 2 == 1:
            h = poly_pow_mod(r, (q**d - 1) // 2, f)
            cand = poly_gcd(h - one, f)
        else:
            # characteristic 2: use the trace map over F_{2^(kd)}
            k = (q**d).bit_length() - 1
            acc = r % f
            term = r % f
            for _ in range(k - 1):
                term = (term * term) % f
                acc = (acc + term) % f
            cand = poly_gcd(acc, f)
        if 0 < cand.degree < f.degree:
            left = cand.monic()
            right = (f // cand).monic()
            return _equal_degree_split(left, d, q, rng) + _equal_degree_split(
                right, d, q, rng
            )


# ------------------------------------------------------------- rationals


def _factor_rational_squarefree(f: Polynomial):
    """Irreducible monic factors of a squarefree f over Q (Zassenhaus)."""
    f = f.monic()
    if f.degree == 1:
        return [f]
    # clear denominators to a primitive integer polynomial
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    int_coeffs = [int(c * den) for c in f.coeffs]
    g = _gcd_list(int_coeffs)
    int_coeffs = [c // g for c in int_coeffs]
    factors = _zassenhaus(int_coeffs)
    out = []
    for fac in factors:
        poly = Polynomial(QQ, [Fraction(c) for c in fac]).monic()
        out.append(poly)
    return out


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _gcd_list(values):
    g = 0
    for v in values:
        g = _gcd_int(g, v)
    return g or 1


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def _int_poly_divmod(a, b):
    """Division in Z[x] assuming b has invertible (unit) lead; returns
    (quotient, remainder) or None if division leaves the integers."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [0], a
    lead = b[-1]
    quo = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = a[db + k]
        if c % lead != 0:
            return None
        q = c // lead
        quo[k] = q
        if q:
            for j, cb in enumerate(b):
                a[j + k] -= q * cb
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return quo, a


def _zassenhaus(coeffs):
    """Irreducible integer factors of a primitive squarefree integer
    polynomial (content 1), as coefficient lists."""
    n = len(coeffs) - 1
    if n == 1:
        return [coeffs]
    lc = coeffs[-1]
    # monic transform: T(x) = lc^(n-1) * F(x / lc), whose lead is 1
    monic = [coeffs[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    # pick a prime where the reduction stays squarefree
    p = None
    for cand in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 2):
        if lc % cand == 0:
            continue
        field = GF(cand)
        fp = Polynomial(field, monic)
        if fp.degree != n:
            continue
        d = fp.derivative()
        if d.is_zero():
            continue
        if poly_gcd(fp, d).is_constant():
            p = cand
            break
    if p is None:
        raise UnsupportedBase("no small prime keeps the polynomial squarefree")
    field = GF(p)
    fp = Polynomial(field, monic).monic()
    modular = _factor_finite_squarefree(fp, seed=0)
    if len(modular) == 1:
        return [coeffs]
    # Landau-Mignotte style bound on factor coefficients of the monic T
    height = max(abs(c) for c in monic)
    bound = (n + 1) * (1 << n) * height
    k = 1
    pk = p
    while pk <= 2 * bound:
        pk *= p
        k += 1
    lifted = _hensel_lift_list(monic, modular, p, k)
    raw = _recombine(monic, lifted, pk)
    # undo the monic transform: factor of F = primitive part of G(lc*x)
    out = []
    for fac in raw:
        m = len(fac) - 1
        scaled = [fac[i] * lc**i for i in range(m + 1)]
        g = _gcd_list(scaled)
        out.append([c // g for c in scaled])
    return out


def _sym_mod(c, pk):
    c %= pk
    if 2 * c > pk:
        c -= pk
    return c


def _hensel_lift_list(target, modular_factors, p, k):
    """Lift monic factors of a monic integer polynomial from mod p to
    mod p^k, recursively pairing the first against the rest."""
    field = GF(p)
    if len(modular_factors) == 1:
        # the target is already the lift of this single factor
        return [list(target)]
    g0 = modular_factors[0]
    rest = Polynomial.one(field)
    for h in modular_factors[1:]:
        rest = rest * h
    g_int, h_int = _hensel_lift_pair(target, g0, rest, p, k)
    sub = _hensel_lift_list(h_int, modular_factors[1:], p, k)
    return [g_int] + sub


def _poly_to_ints(f: Polynomial, p):
    return [c.value for c in f.coeffs]


def _hensel_lift_pair(f_int, g_p, h_p, p, k):
    """f = g*h mod p with g, h monic coprime mod p; lift to mod p^k."""
    field = GF(p)
    d, s, t = poly_ext_gcd(g_p, h_p)
    if not d.is_one():
        raise ArithmeticError("modular factors are not coprime")
    g = [_sym_mod(c, p) for c in _poly_to_ints(g_p, p)]
    h = [_sym_mod(c, p) for c in _poly_to_ints(h_p, p)]
    pj = p
    for _ in range(k - 1):
        pj2 = pj * p
        prod = _int_poly_mul(g, h)
        width = max(len(f_int), len(prod))
        fi = f_int + [0] * (width - len(f_int))
        pr = prod + [0] * (width - len(prod))
        e = [((fc - pc) // pj) % p for fc, pc in zip(fi, pr)]
        e_poly = Polynomial(field, e)
        if e_poly.is_zero():
            pj = pj2
            continue
        u = s * e_poly
        q, dh = u.divmod(Polynomial(field, h))
        dg = t * e_poly + q * Polynomial(field, g)
        if dg.degree >= len(g) - 1 or dh.degree >= len(h) - 1:
            raise ArithmeticError("lift correction degree overflow")
        dg_int = [_sym_mod(c.value, p) for c in dg.coeffs]
        dh_int = [_sym_mod(c.value, p) for c in dh.coeffs]
        g = _int_poly_addmul(g, dg_int, pj, pj2)
        h = _int_poly_addmul(h, dh_int, pj, pj2)
        pj = pj2
    return g, h


def _int_poly_addmul(base, delta, pj, mod):
    out = list(base)
    while len(out) < len(delta):
        out.append(0)
    for i, c in enumerate(delta):
        out[i] = _sym_mod(out[i] + pj * c, mod)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _recombine(target, lifted, pk):
    """Subset recombination of Hensel-lifted factors against the monic
    integer polynomial `target`; returns irreducible integer factors."""
    from itertools import combinations

    remaining = list(lifted)
    current = list(target)
    found = []
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in combinations(range(len(remaining)), size):
            prod = [1]
            for idx in combo:
                prod = _int_poly_mul(prod, remaining[idx])
            cand = [_sym_mod(c, pk) for c in prod]
            while len(cand) > 1 and cand[-1] == 0:
                cand.pop()
            division = _int_poly_divmod(current, cand)
            if division is None:
                continue
            quo, rem = division
            if any(rem_c != 0 for rem_c in rem):
                continue
            found.append(cand)
            current = quo
            remaining = [
                r for i, r in enumerate(remaining) if i not in set(combo)
            ]
            hit = True
            break
        if not hit:
            size += 1
    if len(current) > 1:
        found.append(current)
    return found


# -------------------------------------------------- towers over Q (Trager)


def _factor_tower_squarefree(f: Polynomial, max_degree: int, seed: int):
    """Irreducible monic factors of a squarefree f over an algebraic
    extension K = base(alpha), by norm descent to the base."""
    from .towers import RationalFunctionField

    K = f.field
    base = K.base
    mu = K.relation  # minimal polynomial of the generator over base
    f = f.monic()
    if f.degree == 1:
        return [f]

    frac = RationalFunctionField(base, "@x")
    x_rf = frac.gen()

    shift = 0
    while True:
        shifted = _shift_by_generator(f, shift)
        norm = _norm_to_base(shifted, mu, frac, x_rf)
        d = norm.derivative()
        if not d.is_zero() and poly_gcd(norm, d).is_constant():
            break
        shift += 1
        if shift > 4 * f.degree * mu.degree + 4:
            raise UnsupportedBase("no squarefree norm shift found")
    _, norm_factors = factor_poly(
        norm, max_degree=max(max_degree, norm.degree), seed=seed
    )
    out = []
    alpha = K.gen()
    for nf, _mult in norm_factors:
        # lift N_i to K[x], undo the shift x -> x + s*alpha, gcd with f
        lifted = nf.map_coeffs(K, K.coerce)
        x_shift = Polynomial(
            K, [K.coerce(shift) * alpha, K.one()]
        )
        cand = lifted.compose(x_shift)
        g = poly_gcd(f, cand)
        if g.degree > 0:
            out.append(g.monic())
            f = (f // g).monic()
    if f.degree > 0:
        out.append(f)
    return out


def _shift_by_generator(f: Polynomial, s: int):
    """f(x - s*alpha) over the extension field."""
    K = f.field
    if s == 0:
        return f
    alpha = K.gen()
    shift_poly = Polynomial(K, [K.coerce(-s) * alpha, K.one()])
    return f.compose(shift_poly)


def _norm_to_base(f: Polynomial, mu: Polynomial, frac, x_rf):
    """Norm of f from K[x] down to base[x], as a polynomial over base.

    Computed as Res_y(mu(y), f~(x, y)) where f~ writes each K
    coefficient as a polynomial in y over the base; the resultant runs
    over the rational function field base(x)."""
    base = frac.coefficient_field
    deg_mu = mu.degree
    # coefficient polynomials in x for each power of the generator
    x_polys = [[] for _ in range(deg_mu)]
    for i in range(f.degree + 1):
        coords = f.field.coords(f.coeff(i))
        for j in range(deg_mu):
            x_polys[j].append(coords[j])
    y_coeffs = []
    for j in range(deg_mu):
        poly_x = Polynomial(base, x_polys[j])
        y_coeffs.append(frac.from_polynomial(poly_x))
    f_tilde = Polynomial(frac, y_coeffs)
    mu_frac = mu.map_coeffs(frac, lambda c: frac.constant(c))
    res = resultant(mu_frac, f_tilde)
    num, den = res.num, res.den
    if not den.is_one():
        raise ArithmeticError("norm resultant produced a denominator")
    return num
