"""Finite dimensional Hopf algebras given by sparse structure tensors.

A Hopf algebra of dimension d over an exact base field is stored
through a distinguished basis: a sparse multiplication table
(i, j) -> [(k, c)], a unit vector, a sparse coproduct
i -> [(j, k, c)], a counit vector and an antipode matrix whose columns
are the antipode images of the basis.  All five axiom families
(associativity and unit, coassociativity and counit, bialgebra
compatibility, antipode identity on both sides) are verified
exhaustively on basis tuples at construction; nothing is trusted.

The antipode is never guessed: when not supplied it is derived from
its defining identity by forward substitution along the coproduct
(each basis element's diagonal coproduct leg is isolated and inverted
through a right regular representation), with a dense linear solve as
a fallback.  Uniqueness for bialgebras makes the result canonical.
"""

from __future__ import annotations

from .errors import (
    AxiomViolation,
    NotModuleAlgebra,
    NotPrimitiveRoot,
    UnsupportedBase,
)
from .matrix import Matrix


def _norm_terms(field, terms):
    out = {}
    for idx, c in terms:
        c = field.coerce(c)
        if not c:
            continue
        out[idx] = out.get(idx, field.zero()) + c
    return tuple(sorted((k, v) for k, v in out.items() if v))


def _norm_pairs(field, terms):
    out = {}
    for j, k, c in terms:
        c = field.coerce(c)
        if not c:
            continue
        key = (j, k)
        out[key] = out.get(key, field.zero()) + c
    return tuple((j, k, v) for (j, k), v in sorted(out.items()) if v)


class HopfAlgebra:
    """Hopf algebra with a named basis and verified structure tensors."""

    __slots__ = ("field", "dim", "names", "mult", "coprod", "counit",
                 "unit", "antipode")

    def __init__(self, field, names, mult, coprod, counit, unit,
                 antipode=None, check=True):
        self.field = field
        self.names = list(names)
        d = len(self.names)
        self.dim = d
        table = {}
        for (i, j), terms in mult.items():
            if not (0 <= i < d and 0 <= j < d):
                raise ValueError("multiplication table index out of range")
            nt = _norm_terms(field, terms)
            if nt:
                table[(i, j)] = nt
        self.mult = table
        if len(coprod) != d:
            raise ValueError("need one coproduct entry per basis element")
        self.coprod = [_norm_pairs(field, terms) for terms in coprod]
        if len(counit) != d or len(unit) != d:
            raise ValueError("counit and unit must have length dim")
        self.counit = [field.coerce(c) for c in counit]
        self.unit = [field.coerce(c) for c in unit]
        if antipode is None:
            self.antipode = self._solve_antipode()
        else:
            self.antipode = antipode.map_entries(field.coerce, field)
        if check:
            self._verify()

    # ------------------------------------------------------- arithmetic

    def basis_product(self, i, j):
        """Sparse product of two basis elements."""
        return self.mult.get((i, j), ())

    def multiply(self, x, y):
        """Product of dense coordinate vectors."""
        F = self.field
        out = [F.zero()] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, ck in self.basis_product(i, j):
                    out[k] = out[k] + c * ck
        return out

    def basis_vector(self, i):
        F = self.field
        out = [F.zero()] * self.dim
        out[i] = F.one()
        return out

    def right_regular(self, vec):
        """Matrix of w |-> w * vec on coordinate columns."""
        F = self.field
        d = self.dim
        rows = [[F.zero()] * d for _ in range(d)]
        for l in range(d):
            for t, vt in enumerate(vec):
                if not vt:
                    continue
                for u, cu in self.basis_product(l, t):
                    rows[u][l] = rows[u][l] + vt * cu
        return Matrix(F, rows)

    def counit_of(self, x):
        F = self.field
        out = F.zero()
        for c, e in zip(x, self.counit):
            if c and e:
                out = out + c * e
        return out

    def apply_antipode(self, x):
        return self.antipode.mul_vec(x)

    def tensor_square_product(self, A, B):
        """Product of sparse elements of the tensor square, given as
        dicts (i, j) -> coefficient."""
        F = self.field
        out = {}
        for (a, b), ca in A.items():
            for (c, e), cb in B.items():
                s = ca * cb
                if not s:
                    continue
                for u, cu in self.basis_product(a, c):
                    for v, cv in self.basis_product(b, e):
                        key = (u, v)
                        t = out.get(key, F.zero()) + s * cu * cv
                        if t:
                            out[key] = t
                        elif key in out:
                            del out[key]
        return out

    def coproduct_sparse(self, i):
        return {(j, k): c for j, k, c in self.coprod[i]}

    def is_semisimple(self):
        """Characteristic-zero trace criterion on the antipode square."""
        if self.field.characteristic != 0:
            raise UnsupportedBase(
                "the trace criterion decides semisimplicity only in "
                "characteristic zero"
            )
        S2 = self.antipode * self.antipode
        return bool(S2.trace())

    def structure_key(self):
        """Canonical hashable form of all structure tensors."""
        return (
            tuple(sorted(self.mult.items())),
            tuple(self.coprod),
            tuple(self.counit),
            tuple(self.unit),
            tuple(tuple(r) for r in self.antipode.rows),
        )

    # ------------------------------------------------------ verification

    def _verify(self):
        F = self.field
        d = self.dim
        one = self.unit
        # unit laws
        for i in range(d):
            e = self.basis_vector(i)
            if self.multiply(one, e) != e or self.multiply(e, one) != e:
                raise AxiomViolation("unit law fails at basis %d" % i)
        # associativity on basis triples, sparse
        for i in range(d):
            for j in range(d):
                ij = self.basis_product(i, j)
                for k in range(d):
                    jk = self.basis_product(j, k)
                    left = {}
                    for l, c in ij:
                        for u, cu in self.basis_product(l, k):
                            left[u] = left.get(u, F.zero()) + c * cu
                    right = {}
                    for l, c in jk:
                        for u, cu in self.basis_product(i, l):
                            right[u] = right.get(u, F.zero()) + c * cu
                    left = {u: c for u, c in left.items() if c}
                    right = {u: c for u, c in right.items() if c}
                    if left != right:
                        raise AxiomViolation(
                            "associativity fails at (%d, %d, %d)"
                            % (i, j, k)
                        )
        # counit laws
        if self.counit_of(one) != F.one():
            raise AxiomViolation("counit of the unit is not 1")
        for i in range(d):
            left = [F.zero()] * d
            right = [F.zero()] * d
            for j, k, c in self.coprod[i]:
                if self.counit[j]:
                    left[k] = left[k] + c * self.counit[j]
                if self.counit[k]:
                    right[j] = right[j] + c * self.counit[k]
            e = self.basis_vector(i)
            if left != e or right != e:
                raise AxiomViolation("counit law fails at basis %d" % i)
        # coassociativity, sparse 3-tensors
        for i in range(d):
            left = {}
            right = {}
            for j, k, c in self.coprod[i]:
                for a, b, cc in self.coprod[j]:
                    key = (a, b, k)
                    left[key] = left.get(key, F.zero()) + c * cc
                for a, b, cc in self.coprod[k]:
                    key = (j, a, b)
                    right[key] = right.get(key, F.zero()) + c * cc
            left = {k: c for k, c in left.items() if c}
            right = {k: c for k, c in right.items() if c}
            if left != right:
                raise AxiomViolation(
                    "coassociativity fails at basis %d" % i
                )
        # bialgebra compatibility
        unit_sparse = {
            (j, k): self.unit[j] * self.unit[k]
            for j in range(d) if self.unit[j]
            for k in range(d) if self.unit[k]
        }
        delta_one = {}
        for i, ci in enumerate(self.unit):
            if not ci:
                continue
            for j, k, c in self.coprod[i]:
                key = (j, k)
                t = delta_one.get(key, F.zero()) + ci * c
                if t:
                    delta_one[key] = t
                elif key in delta_one:
                    del delta_one[key]
        if delta_one != unit_sparse:
            raise AxiomViolation("coproduct of the unit is not 1 (x) 1")
        for i in range(d):
            di = self.coproduct_sparse(i)
            for j in range(d):
                want = {}
                eps = F.zero()
                for k, c in self.basis_product(i, j):
                    eps = eps + c * self.counit[k]
                    for a, b, cc in self.coprod[k]:
                        key = (a, b)
                        t = want.get(key, F.zero()) + c * cc
                        if t:
                            want[key] = t
                        elif key in want:
                            del want[key]
                got = self.tensor_square_product(
                    di, self.coproduct_sparse(j)
                )
                if got != want:
                    raise AxiomViolation(
                        "coproduct is not multiplicative at (%d, %d)"
                        % (i, j)
                    )
                if eps != self.counit[i] * self.counit[j]:
                    raise AxiomViolation(
                        "counit is not multiplicative at (%d, %d)"
                        % (i, j)
                    )
        # antipode identity on both sides
        for i in range(d):
            left = [F.zero()] * d
            right = [F.zero()] * d
            for j, k, c in self.coprod[i]:
                sj = self.antipode.col(j)
                ek = self.basis_vector(k)
                term = self.multiply(sj, ek)
                for u in range(d):
                    if term[u]:
                        left[u] = left[u] + c * term[u]
                sk = self.antipode.col(k)
                term = self.multiply(self.basis_vector(j), sk)
                for u in range(d):
                    if term[u]:
                        right[u] = right[u] + c * term[u]
            want = [self.counit[i] * u for u in self.unit]
            if left != want or right != want:
                raise AxiomViolation(
                    "antipode identity fails at basis %d" % i
                )

    # --------------------------------------------------- antipode solve

    def _solve_antipode(self):
        F = self.field
        d = self.dim
        solved = {}
        remaining = set(range(d))
        progress = True
        while remaining and progress:
            progress = False
            for i in sorted(remaining):
                diag = [F.zero()] * d
                known = [self.counit[i] * u for u in self.unit]
                ready = True
                for j, k, c in self.coprod[i]:
                    if j == i:
                        diag[k] = diag[k] + c
                    elif j in solved:
                        term = self.multiply(
                            solved[j], self.basis_vector(k)
                        )
                        for u in range(d):
                            if term[u]:
                                known[u] = known[u] - c * term[u]
                    else:
                        ready = False
                        break
                if not ready or not any(diag):
                    continue
                R = self.right_regular(diag)
                sol = R.solve(known)
                if sol is None:
                    continue
                solved[i] = list(sol)
                remaining.discard(i)
                progress = True
        if remaining:
            return self._solve_antipode_dense()
        cols = [solved[i] for i in range(d)]
        return Matrix.from_cols(F, cols)

    def _solve_antipode_dense(self):
        # full linear system in the d^2 antipode entries
        F = self.field
        d = self.dim
        rows = []
        rhs = []
        for i in range(d):
            coeff = {}
            for j, k, c in self.coprod[i]:
                for l in range(d):
                    for u, cu in self.basis_product(l, k):
                        key = (u, l, j)
                        coeff[key] = coeff.get(key, F.zero()) + c * cu
            for u in range(d):
                row = [F.zero()] * (d * d)
                for (uu, l, j), c in coeff.items():
                    if uu == u:
                        row[l * d + j] = row[l * d + j] + c
                rows.append(row)
                rhs.append(self.counit[i] * self.unit[u])
        sol = Matrix(F, rows, ncols=d * d).solve(rhs)
        if sol is None:
            raise AxiomViolation(
                "the bialgebra admits no antipode: the defining linear "
                "system is unsolvable"
            )
        cols = [[sol[l * d + j] for l in range(d)] for j in range(d)]
        return Matrix.from_cols(F, cols)


# ----------------------------------------------------------- constructors


def group_algebra(field, table) -> HopfAlgebra:
    """Hopf algebra of a finite group given by its composition table
    (table[i][j] = index of the product); group-like coproduct."""
    n = len(table)
    identity = None
    for e in range(n):
        if all(table[e][j] == j and table[j][e] == j for j in range(n)):
            identity = e
            break
    if identity is None:
        raise ValueError("composition table has no identity element")
    one = field.one()
    mult = {
        (i, j): ((table[i][j], one),) for i in range(n) for j in range(n)
    }
    coprod = [((i, i, one),) for i in range(n)]
    counit = [one] * n
    unit = [field.zero()] * n
    unit[identity] = one
    names = ["1" if i == identity else "g%d" % i for i in range(n)]
    return HopfAlgebra(field, names, mult, coprod, counit, unit)


def dual(H: HopfAlgebra) -> HopfAlgebra:
    """Dual Hopf algebra on the dual basis: multiplication and
    coproduct tensors swap roles, the antipode transposes."""
    F = H.field
    d = H.dim
    mult = {}
    for i, terms in enumerate(H.coprod):
        for j, k, c in terms:
            mult.setdefault((j, k), []).append((i, c))
    coprod = [[] for _ in range(d)]
    for (j, k), terms in H.mult.items():
        for i, c in terms:
            coprod[i].append((j, k, c))
    names = [name + "*" for name in H.names]
    return HopfAlgebra(
        F, names, mult, coprod,
        counit=list(H.unit), unit=list(H.counit),
        antipode=H.antipode.transpose(),
    )


def taft(field, m, n, q) -> HopfAlgebra:
    """Generalized Taft algebra of dimension m^2 n: basis g^a x^b with
    a < mn, b < m, relations g^{mn} = 1, g x = q x g, x^m = g^m - 1,
    group-like g and skew-primitive x."""
    if m < 2 or n < 2:
        raise ValueError("need m, n >= 2")
    q = field.coerce(q)
    if q ** m != field.one():
        raise NotPrimitiveRoot("q^m != 1")
    for k in range(1, m):
        if q ** k == field.one():
            raise NotPrimitiveRoot("q has order smaller than %d" % m)
    F = field
    one = F.one()
    mn = m * n
    d = m * m * n

    def idx(a, b):
        return a * m + b

    def name(a, b):
        parts = []
        if a == 1:
            parts.append("g")
        elif a > 1:
            parts.append("g^%d" % a)
        if b == 1:
            parts.append("x")
        elif b > 1:
            parts.append("x^%d" % b)
        return " ".join(parts) or "1"

    names_h = [name(a, b) for a in range(mn) for b in range(m)]
    mult = {}
    for a in range(mn):
        for b in range(m):
            for c in range(mn):
                for e in range(m):
                    # x^b g^c = q^{-bc} g^c x^b, then reduce x^m
                    s = q ** ((-b * c) % m)
                    be = b + e
                    if be < m:
                        terms = (((idx((a + c) % mn, be)), s),)
                    else:
                        be -= m
                        terms = (
                            (idx((a + c + m) % mn, be), s),
                            (idx((a + c) % mn, be), -s),
                        )
                    mult[(idx(a, b), idx(c, e))] = terms

    g = idx(1, 0)
    x = idx(0, 1)
    unit = [F.zero()] * d
    unit[idx(0, 0)] = one
    counit = [one if b == 0 else F.zero()
              for a in range(mn) for b in range(m)]

    helper = HopfAlgebra.__new__(HopfAlgebra)
    helper.field = F
    helper.dim = d
    helper.mult = mult
    delta_g = {(g, g): one}
    delta_x = {(x, g): one, (idx(0, 0), x): one}
    coprod = []
    for a in range(mn):
        for b in range(m):
            acc = {(idx(0, 0), idx(0, 0)): one}
            for _ in range(a):
                acc = helper.tensor_square_product(acc, delta_g)
            for _ in range(b):
                acc = helper.tensor_square_product(acc, delta_x)
            coprod.append([(j, k, c) for (j, k), c in acc.items()])
    return HopfAlgebra(F, names_h, mult, coprod, counit, unit)


def nichols16(field) -> HopfAlgebra:
    """Sixteen dimensional Nichols Hopf algebra: g of order two, three
    skew-primitive anticommuting square-zero generators."""
    if field.characteristic != 0:
        raise UnsupportedBase(
            "this Hopf algebra is defined over characteristic zero"
        )
    F = field
    one = F.one()
    d = 16

    def idx(a, bits):
        return a * 8 + bits

    def bits_list(bits):
        return [i for i in range(3) if bits & (1 << i)]

    def name(a, bits):
        parts = (["g"] if a else []) + [
            "x%d" % i for i in bits_list(bits)
        ]
        return " ".join(parts) or "1"

    def sign_merge(sbits, tbits):
        # sort the concatenation of the two ascending runs
        inv = 0
        for s in bits_list(sbits):
            for t in bits_list(tbits):
                if s > t:
                    inv += 1
        return -one if inv % 2 else one

    names = [name(a, bits) for a in range(2) for bits in range(8)]
    mult = {}
    for a in range(2):
        for sb in range(8):
            for c in range(2):
                for tb in range(8):
                    if sb & tb:
                        continue
                    s = one
                    if c and bin(sb).count("1") % 2:
                        s = -s
                    s = s * sign_merge(sb, tb)
                    mult[(idx(a, sb), idx(c, tb))] = (
                        (idx((a + c) % 2, sb | tb), s),
                    )

    helper = HopfAlgebra.__new__(HopfAlgebra)
    helper.field = F
    helper.dim = d
    helper.mult = mult
    g = idx(1, 0)
    e0 = idx(0, 0)
    delta_g = {(g, g): one}
    coprod = []
    for a in range(2):
        for bits in range(8):
            acc = {(e0, e0): one}
            for _ in range(a):
                acc = helper.tensor_square_product(acc, delta_g)
            for i in bits_list(bits):
                xi = idx(0, 1 << i)
                dxi = {(e0, xi): one, (xi, g): one}
                acc = helper.tensor_square_product(acc, dxi)
            coprod.append([(j, k, c) for (j, k), c in acc.items()])
    counit = [one if bits == 0 else F.zero()
              for a in range(2) for bits in range(8)]
    unit = [F.zero()] * d
    unit[e0] = one
    return HopfAlgebra(F, names, mult, coprod, counit, unit)


# -------------------------------------------------- action to coaction


def action_to_coaction(H: HopfAlgebra, action, algebra_mult,
                       algebra_unit):
    """Convert a verified module-algebra action into a coaction of the
    dual.

    ``action`` lists one matrix per basis element of H acting on the
    algebra's coordinate space; ``algebra_mult`` is the sparse
    multiplication table of the algebra and ``algebra_unit`` its unit
    vector.  Returns (dual Hopf algebra, rho) with rho the sparse
    coaction a_s |-> sum_t,i rho[s][(t, i)] a_t (x) e^i."""
    F = H.field
    d = H.dim
    dA = len(algebra_unit)
    if len(action) != d:
        raise ValueError("need one action matrix per basis element")

    def amul(xvec, yvec):
        out = [F.zero()] * dA
        for i, xi in enumerate(xvec):
            if not xi:
                continue
            for j, yj in enumerate(yvec):
                if not yj:
                    continue
                c = xi * yj
                for k, ck in algebra_mult.get((i, j), ()):
                    out[k] = out[k] + c * ck
        return out

    def basis(s):
        v = [F.zero()] * dA
        v[s] = F.one()
        return v

    # unit of H acts as the identity
    acc = Matrix.zeros(F, dA, dA)
    for i, ci in enumerate(H.unit):
        if ci:
            acc = acc + action[i].scale(ci)
    if not acc.is_identity():
        raise NotModuleAlgebra("the unit of the Hopf algebra does not "
                               "act as the identity")
    # the action is a homomorphism from H
    for i in range(d):
        for j in range(d):
            want = Matrix.zeros(F, dA, dA)
            for k, c in H.basis_product(i, j):
                want = want + action[k].scale(c)
            if action[i] * action[j] != want:
                raise NotModuleAlgebra(
                    "action does not respect the product at (%d, %d)"
                    % (i, j)
                )
    # module-algebra law against the coproduct, and unitality
    for i in range(d):
        got_unit = action[i].mul_vec(algebra_unit)
        want_unit = [H.counit[i] * u for u in algebra_unit]
        if got_unit != want_unit:
            raise NotModuleAlgebra(
                "action does not scale the algebra unit by the counit "
                "at %d" % i
            )
        for s in range(dA):
            for t in range(dA):
                prod = [F.zero()] * dA
                for k, ck in algebra_mult.get((s, t), ()):
                    prod[k] = ck
                lhs = action[i].mul_vec(prod)
                rhs = [F.zero()] * dA
                for j, k, c in H.coprod[i]:
                    term = amul(
                        action[j].mul_vec(basis(s)),
                        action[k].mul_vec(basis(t)),
                    )
                    for u in range(dA):
                        if term[u]:
                            rhs[u] = rhs[u] + c * term[u]
                if lhs != rhs:
                    raise NotModuleAlgebra(
                        "the Leibniz-style module-algebra law fails at "
                        "basis %d on (%d, %d)" % (i, s, t)
                    )
    K = dual(H)
    rho = []
    for s in range(dA):
        entry = {}
        for i in range(d):
            col = action[i].col(s)
            for t in range(dA):
                if col[t]:
                    entry[(t, i)] = col[t]
        rho.append(entry)
    return K, rho


def matrix_algebra(field, n):
    """Structure constants of the n-by-n matrix algebra.

    Basis: matrix units in row-major order, E(a, b) at index n*a + b.
    Returns (mult, unit) in the sparse tensor format used by actions
    and coactions; pairs multiplying to zero are absent.
    """
    one = field.one()
    mult = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                mult[(n * a + b, n * b + c)] = ((n * a + c, one),)
    unit = [one if a == b else field.zero()
            for a in range(n) for b in range(n)]
    return mult, unit


def adjoint_action(H: HopfAlgebra, rep):
    """Action matrices of H on Mat_n twisted by a representation.

    ``rep`` lists one n-by-n matrix over H's field per basis element of
    H, the images of an algebra map H -> Mat_n.  The adjoint action
    sends a matrix M to sum rep(h1) M rep(S(h2)) over the coproduct
    legs of h; the output lists the resulting operators on row-major
    flattened matrices, one per H basis element.  No axiom is verified
    here: feed the result to action_to_coaction, which checks them all.
    """
    F = H.field
    d = H.dim
    if len(rep) != d:
        raise ValueError("rep must list one matrix per basis element")
    n = rep[0].nrows
    rep_s = []
    for k in range(d):
        acc = Matrix.zeros(F, n)
        for l in range(d):
            c = H.antipode[l, k]
            if c:
                acc = acc + rep[l].scale(c)
        rep_s.append(acc)
    zero = F.zero()
    out = []
    for i in range(d):
        cols = []
        for a in range(n):
            for b in range(n):
                flat = [zero] * (n * n)
                for j, k, c in H.coprod[i]:
                    # rep[j] E(a, b) rep_s[k] has (r, s) entry
                    # rep[j][r, a] * rep_s[k][b, s]
                    for r in range(n):
                        lj = rep[j][r, a]
                        if not lj:
                            continue
                        row = c * lj
                        for s in range(n):
                            w = rep_s[k][b, s]
                            if w:
                                flat[n * r + s] = flat[n * r + s] + row * w
                cols.append(flat)
        out.append(Matrix.from_cols(F, cols))
    return out
