"""Imperfect base fields K = F_q(t_1, ..., t_c) and p-th root adjunctions.

K is imperfect in characteristic p: [K : K^p] = p^c with monomial basis
{t^e : 0 <= e_i < p}.  The module provides exact p-th power tests,
decomposition over K^(p^j) with root representatives, partial
derivatives, and two models of K(x^(1/p)): a renamed-variable model when
x is one of the t_i (arithmetic stays in a plain rational function
field) and a generic model K[xi]/(xi^p - x) for arbitrary x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dcfield

from .ffield import FiniteField
from .multipoly import MPoly, gcd
from .linalg import LinearSolver


def _poly_str(f: MPoly, names) -> str:
    if f.is_zero():
        return "0"
    bits = []
    for e in sorted(f.terms, key=lambda t: t[::-1], reverse=True):
        c = f.terms[e]
        mono = "*".join(
            f"{names[i]}^{k}" if k > 1 else names[i]
            for i, k in enumerate(e) if k)
        cs = f.field.str_of(c)
        if mono:
            bits.append(mono if cs == "1" else f"{cs}*{mono}")
        else:
            bits.append(cs)
    return " + ".join(bits)


class RatElem:
    """A reduced fraction num/den of multivariate polynomials."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num: MPoly, den: MPoly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            num, den = _reduce_fraction(num, den)
        self.field = field
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def const_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.const_value()

    def _coerce(self, other):
        if isinstance(other, RatElem):
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        # reduction keeps constant denominators at exactly 1, so the
        # mixed sums below stay in lowest terms without a new gcd
        if d1 is d2 or d1 == d2:
            return RatElem(self.field, self.num + o.num, d1,
                           reduce=not d1.is_constant())
        if d2.is_constant():
            return RatElem(self.field, self.num + o.num * d1, d1,
                           reduce=False)
        if d1.is_constant():
            return RatElem(self.field, o.num + self.num * d2, d2,
                           reduce=False)
        return RatElem(self.field, self.num * d2 + o.num * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return RatElem(self.field, -self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        if d1 is d2 or d1 == d2:
            return RatElem(self.field, self.num - o.num, d1,
                           reduce=not d1.is_constant())
        if d2.is_constant():
            return RatElem(self.field, self.num - o.num * d1, d1,
                           reduce=False)
        if d1.is_constant():
            return RatElem(self.field, self.num * d2 - o.num, d2,
                           reduce=False)
        return RatElem(self.field, self.num * d2 - o.num * d1, d1 * d2)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_constant() and o.den.is_constant():
            return RatElem(self.field, self.num * o.num, self.den,
                           reduce=False)
        return RatElem(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return RatElem(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one() / self) ** (-n)
        return RatElem(self.field, self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        names = self.field.names
        top = _poly_str(self.num, names)
        if self.den.is_constant():
            return top
        return f"({top})/({_poly_str(self.den, names)})"


def _reduce_fraction(num: MPoly, den: MPoly):
    F = num.field
    if num.is_zero():
        return num, MPoly.const(F, num.nvars, F.one())
    if den.is_constant():
        c = den.const_value()
        if c == F.one():
            return num, den
        return num.scale(F.inv(c)), MPoly.const(F, num.nvars, F.one())
    if len(den.terms) == 1:
        (e_den, c), = den.terms.items()
        shift = list(e_den)
        for e in num.terms:
            shift = [min(s, x) for s, x in zip(shift, e)]
        if any(shift):
            num = MPoly(F, num.nvars,
                        {tuple(a - s for a, s in zip(e, shift)): v
                         for e, v in num.terms.items()})
            e_den = tuple(a - s for a, s in zip(e_den, shift))
        inv = F.inv(c)
        num = num.scale(inv)
        den = MPoly(F, num.nvars, {e_den: F.one()})
        return num, den
    g = gcd(num, den)
    if not g.is_constant():
        num, den = num.divexact(g), den.divexact(g)
    _, lc = den._lt()
    if lc != F.one():
        inv = F.inv(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


class RationalField:
    """K = F_q(t_1, ..., t_c); c = 0 gives F_q itself, wrapped."""

    def __init__(self, coeff_field: FiniteField, names):
        self.coeff_field = coeff_field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.p = coeff_field.p

    def __repr__(self):
        if not self.names:
            return repr(self.coeff_field)
        return f"{self.coeff_field}({','.join(self.names)})"

    def __eq__(self, other):
        return (isinstance(other, RationalField)
                and self.coeff_field == other.coeff_field
                and self.names == other.names)

    def __hash__(self):
        return hash((self.coeff_field, self.names))

    # constructors

    def _one_poly(self):
        return MPoly.const(self.coeff_field, self.nvars, self.coeff_field.one())

    def zero(self):
        return RatElem(self, MPoly.zero(self.coeff_field, self.nvars),
                       self._one_poly(), reduce=False)

    def one(self):
        return RatElem(self, self._one_poly(), self._one_poly(), reduce=False)

    def from_int(self, n: int):
        return RatElem(self, MPoly.from_int(self.coeff_field, self.nvars, n),
                       self._one_poly(), reduce=False)

    def from_coeff(self, c):
        return RatElem(self, MPoly.const(self.coeff_field, self.nvars, c),
                       self._one_poly(), reduce=False)

    def from_poly(self, f: MPoly):
        return RatElem(self, f, self._one_poly(), reduce=False)

    def gen(self, i: int):
        return self.from_poly(MPoly.var(self.coeff_field, self.nvars, i))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps):
        e = tuple(exps)
        return self.from_poly(MPoly(self.coeff_field, self.nvars,
                                    {e: self.coeff_field.one()}))

    # p-th powers

    def pth_power(self, a: RatElem, j: int = 1):
        return RatElem(self, a.num.frobenius(j), a.den.frobenius(j),
                       reduce=False)

    def is_pth_power(self, a: RatElem, j: int = 1):
        """The p^j-th root of a, or None.

        A reduced fraction is a p^j-th power iff numerator and
        denominator separately are (K[t] is factorial and the canonical
        form is unique).
        """
        rn = a.num.pth_root(j)
        if rn is None:
            return None
        rd = a.den.pth_root(j)
        if rd is None:
            return None
        return RatElem(self, rn, rd, reduce=False)

    def pth_basis(self, j: int = 1):
        """Monomial basis of K over K^(p^j): t^e, 0 <= e_i < p^j."""
        rng = range(self.p ** j)
        return [(e, self.monomial(e))
                for e in itertools.product(rng, repeat=self.nvars)]

    def decompose_pth(self, a: RatElem, j: int = 1) -> dict:
        """Write a = sum_e (w_e)^(p^j) t^e over the p^j basis.

        Returns {exponent tuple e: root representative w_e}, zeros
        omitted.  Exact: sum reconstructs a.
        """
        m = self.p ** j
        h = a.num * a.den ** (m - 1)
        groups: dict = {}
        for alpha, c in h.terms.items():
            e = tuple(x % m for x in alpha)
            beta = tuple((x - r) // m for x, r in zip(alpha, e))
            groups.setdefault(e, {})[beta] = self.coeff_field.pth_root(c, j)
        out = {}
        for e, terms in groups.items():
            g = MPoly(self.coeff_field, self.nvars, terms)
            w = RatElem(self, g, a.den)
            if not w.is_zero():
                out[e] = w
        return out

    # calculus

    def partial_derivative(self, a: RatElem, i: int):
        n, d = a.num, a.den
        return RatElem(self, n.derivative(i) * d - n * d.derivative(i), d * d)

    # extensions

    def extend_by_pth_root(self, i: int) -> "RenamedRootExtension":
        return RenamedRootExtension(self, i)

    def adjoin_pth_root(self, x: RatElem, name: str = "xi"):
        return SimpleInseparableExt(self, x, name)


def _rooted_name(name: str, p: int) -> str:
    if name.endswith(")") and "^(1/" in name:
        base, _, tail = name.partition("^(1/")
        depth = int(tail[:-1])
        return f"{base}^(1/{depth * p})"
    return f"{name}^(1/{p})"


@dataclass
class RenamedRootExtension:
    """K' = K(t_i^(1/p)) presented as a rational function field again.

    The new field reuses the variable slot i for the root, so K embeds
    by scaling the i-th exponents by p.  All arithmetic in K' is plain
    RationalField arithmetic, which keeps tower computations cheap.
    """

    base: RationalField
    var_index: int
    ext: RationalField = dcfield(init=False)

    def __post_init__(self):
        K = self.base
        names = list(K.names)
        names[self.var_index] = _rooted_name(names[self.var_index], K.p)
        self.ext = RationalField(K.coeff_field, names)

    @property
    def degree(self):
        return self.base.p

    def embed(self, a: RatElem) -> RatElem:
        i = self.var_index
        p = self.base.p
        return RatElem(self.ext, a.num.scale_exponents(i, p),
                       a.den.scale_exponents(i, p), reduce=False)

    def root(self) -> RatElem:
        """The adjoined root: the image variable t_i of the new field."""
        return self.ext.gen(self.var_index)

    def section(self, a: RatElem) -> RatElem:
        """Preimage under embed; ValueError when a is not in the image."""
        i = self.var_index
        p = self.base.p
        return RatElem(self.base, a.num.scale_exponents(i, 1, p),
                       a.den.scale_exponents(i, 1, p), reduce=False)

    def decompose_base_over_ext_pth(self, a: RatElem) -> dict:
        """Write a in K as sum_e (w_e)^p t^e with w_e in K'.

        The basis runs over monomials in the variables other than the
        rooted one, exponents below p; [K : K'^p] = p^(c-1).
        """
        K, i, p = self.base, self.var_index, self.base.p
        parts = K.decompose_pth(a)
        out: dict = {}
        tau = self.root()
        for f, r in parts.items():
            e = f[:i] + (0,) + f[i + 1:]
            w = self.embed(r) * tau ** f[i]
            out[e] = out[e] + w if e in out else w
        return {e: w for e, w in out.items() if not w.is_zero()}


class ExtElem:
    """Element of K[xi]/(xi^p - x): a vector of p coefficients in K."""

    __slots__ = ("ext", "vec")

    def __init__(self, ext, vec):
        self.ext = ext
        self.vec = tuple(vec)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.vec)

    def constant_part(self):
        return self.vec[0]

    def in_base(self):
        """The element of K this equals, or None if it involves xi."""
        if any(not c.is_zero() for c in self.vec[1:]):
            return None
        return self.vec[0]

    def _coerce(self, other):
        if isinstance(other, ExtElem):
            return other
        if isinstance(other, int):
            return self.ext.from_int(other)
        if isinstance(other, RatElem):
            return self.ext.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtElem(self.ext, [a + b for a, b in zip(self.vec, o.vec)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.ext, [-a for a in self.vec])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.ext.p
        K = self.ext.base
        out = [K.zero() for _ in range(2 * p - 1)]
        for i, a in enumerate(self.vec):
            if a.is_zero():
                continue
            for j, b in enumerate(o.vec):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        x = self.ext.x
        for k in range(2 * p - 2, p - 1, -1):
            c = out[k]
            if not c.is_zero():
                out[k - p] = out[k - p] + c * x
        return ExtElem(self.ext, out[:p])

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self.ext.inv(o)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.ext.inv(self) ** (-n)
        result = self.ext.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.vec == o.vec

    def __repr__(self):
        name = self.ext.name
        bits = []
        for i, c in enumerate(self.vec):
            if c.is_zero():
                continue
            head = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            bits.append(f"({c})" + (f"*{head}" if head else ""))
        return " + ".join(bits) if bits else "0"


class SimpleInseparableExt:
    """K' = K[xi]/(xi^p - x) for x in K with no p-th root in K.

    Field protocol object: zero/one/from_int, characteristic p, p-th
    power tests and decomposition over K'^p.  A p-basis of K' is xi
    together with the t_j for j != i0, where dx/dt_i0 != 0.
    """

    def __init__(self, base: RationalField, x: RatElem, name: str = "xi"):
        if base.is_pth_power(x) is not None:
            raise ValueError("x already has a p-th root in K")
        self.base = base
        self.x = x
        self.name = name
        self.p = base.p
        self.coeff_field = base.coeff_field
        i0 = None
        for i in range(base.nvars):
            if not base.partial_derivative(x, i).is_zero():
                i0 = i
                break
        if i0 is None:
            raise ValueError("x has vanishing differential, not expected "
                             "for a non p-th power")
        self.pivot_var = i0
        self._dec_solver = None
        self._dec_rows = None
        self._dec_cols = None

    def __repr__(self):
        return f"{self.base}[{self.name}]/({self.name}^{self.p} - {self.x})"

    def __eq__(self, other):
        return (isinstance(other, SimpleInseparableExt)
                and self.base == other.base and self.x == other.x)

    def __hash__(self):
        return hash((self.base, self.x))

    @property
    def degree(self):
        return self.p

    # element constructors

    def zero(self):
        return ExtElem(self, [self.base.zero()] * self.p)

    def one(self):
        z = self.base.zero()
        return ExtElem(self, [self.base.one()] + [z] * (self.p - 1))

    def from_int(self, n: int):
        z = self.base.zero()
        return ExtElem(self, [self.base.from_int(n)] + [z] * (self.p - 1))

    def embed(self, a: RatElem):
        z = self.base.zero()
        return ExtElem(self, [a] + [z] * (self.p - 1))

    def root(self):
        """The class of xi."""
        z = self.base.zero()
        vec = [z] * self.p
        vec[1] = self.base.one()
        return ExtElem(self, vec)

    gen = root

    def element(self, coeffs):
        vec = list(coeffs)
        vec += [self.base.zero()] * (self.p - len(vec))
        return ExtElem(self, vec)

    # arithmetic helpers

    def inv(self, z: ExtElem):
        if z.is_zero():
            raise ZeroDivisionError("inverse of zero")
        mod = KPoly(self.base,
                    [-self.x] + [self.base.zero()] * (self.p - 1)
                    + [self.base.one()])
        f = KPoly(self.base, list(z.vec))
        g, u, _ = f.xgcd(mod)
        if g.degree() != 0:
            raise ArithmeticError("xi^p - x not irreducible over K")
        scale = self.base.one() / g.coeffs[0]
        vec = [c * scale for c in u.coeffs]
        vec += [self.base.zero()] * (self.p - len(vec))
        return ExtElem(self, vec[:self.p])

    def pth_power(self, z: ExtElem, j: int = 1):
        """(sum a_i xi^i)^p = sum a_i^p x^i lands in K; iterate for j."""
        cur = z
        for _ in range(j):
            acc = self.base.zero()
            xpow = self.base.one()
            for a in cur.vec:
                acc = acc + self.base.pth_power(a) * xpow
                xpow = xpow * self.x
            cur = self.embed(acc)
        return cur

    # p-th power structure of K'

    def _xj_coords(self):
        """K^p coordinates of x^j for j < p, as root representatives."""
        out = []
        xj = self.base.one()
        for _ in range(self.p):
            out.append(self.base.decompose_pth(xj))
            xj = xj * self.x
        return out

    def pth_basis(self, j: int = 1):
        """Monomial basis of K' over K'^p: xi^a * t^b, b over vars != i0."""
        if j != 1:
            raise NotImplementedError("only j = 1 for extension fields")
        K = self.base
        p = self.p
        others = [k for k in range(K.nvars) if k != self.pivot_var]
        keys = []
        for a in range(p):
            for bs in itertools.product(range(p), repeat=len(others)):
                b = [0] * K.nvars
                for var, e in zip(others, bs):
                    b[var] = e
                keys.append((a, tuple(b)))
        out = []
        for a, b in keys:
            m = self.embed(K.monomial(b)) * self.root() ** a
            out.append(((a, b), m))
        return out

    def _build_decompose_solver(self):
        K = self.base
        p = self.p
        xj = self._xj_coords()
        basis = self.pth_basis()
        cols = [key for key, _ in basis]
        residues = list(itertools.product(range(p), repeat=K.nvars))
        rows = [(i, e) for i in range(p) for e in residues]
        row_pos = {r: k for k, r in enumerate(rows)}
        mat = [[K.zero() for _ in range(len(cols) * p)] for _ in rows]
        for ci, (alpha, beta) in enumerate(cols):
            for jj in range(p):
                col = (alpha, beta, jj)
                # entry rows touched by x^jj * t^beta at xi^alpha
                for e, s in xj[jj].items():
                    tot = tuple(a + b for a, b in zip(e, beta))
                    e2 = tuple(v % p for v in tot)
                    gam = tuple((v - w) // p for v, w in zip(tot, e2))
                    entry = s * K.monomial(gam)
                    mat[row_pos[(alpha, e2)]][ci * p + jj] = \
                        mat[row_pos[(alpha, e2)]][ci * p + jj] + entry
        return rows, cols, mat

    def decompose_pth(self, z: ExtElem, j: int = 1) -> dict:
        """Write z = sum (w_key)^p * basis monomial; zeros omitted."""
        if j != 1:
            raise NotImplementedError("only j = 1 for extension fields")
        K = self.base
        p = self.p
        if self._dec_solver is None:
            rows, cols, flat = self._build_decompose_solver()
            self._dec_rows = rows
            self._dec_cols = cols
            self._dec_solver = LinearSolver(K, flat)
        rhs = []
        coords = [K.decompose_pth(a) for a in z.vec]
        for i, e in self._dec_rows:
            rhs.append(coords[i].get(e, K.zero()))
        sol = self._dec_solver.solve(rhs)
        if sol is None:
            raise ArithmeticError("p-basis decomposition failed; "
                                  "the chosen p-basis is not one")
        out = {}
        for ci, key in enumerate(self._dec_cols):
            vec = sol[ci * p:(ci + 1) * p]
            w = ExtElem(self, vec)
            if not w.is_zero():
                out[key] = w
        return out

    def is_pth_power(self, z: ExtElem, j: int = 1):
        """p^j-th root in K', or None."""
        if j > 1:
            r = self.is_pth_power(z, 1)
            return None if r is None else self.is_pth_power(r, j - 1)
        a0 = z.in_base()
        if a0 is None:
            return None
        if a0.is_zero():
            return self.zero()
        # a0 must lie in K^p[x]: solve sum_j c_j x^j with c_j^p coords
        K = self.base
        target = K.decompose_pth(a0)
        xj = self._xj_coords()
        residues = sorted(set().union(*[set(d) for d in xj + [target]]))
        rows = [[xj[jj].get(e, K.zero()) for jj in range(self.p)]
                for e in residues]
        rhs = [target.get(e, K.zero()) for e in residues]
        sol = LinearSolver(K, rows).solve(rhs)
        if sol is None:
            return None
        return ExtElem(self, sol)


class KPoly:
    """Dense univariate polynomial over a wrapped coefficient field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = list(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def variable(cls, field, k: int = 1):
        return cls(field, [field.zero()] * k + [field.one()])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int):
        return self.coeffs[k] if k < len(self.coeffs) else self.field.zero()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return KPoly(self.field,
                     [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self):
        return KPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return KPoly.zero(self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return KPoly(self.field, out)

    def scale(self, c):
        return KPoly(self.field, [a * c for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, KPoly) and self.coeffs == other.coeffs

    def quo_rem(self, other: "KPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree()
        lcinv = self.field.one() / other.lc()
        quo = [self.field.zero()] * max(0, len(rem) - d)
        while len(rem) - 1 >= d and rem:
            c = rem[-1] * lcinv
            k = len(rem) - 1 - d
            quo[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return KPoly(self.field, quo), KPoly(self.field, rem)

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.one() / self.lc())

    def xgcd(self, other: "KPoly"):
        """(g, u, v) with u*self + v*other = g."""
        F = self.field
        r0, r1 = self, other
        u0, u1 = KPoly.const(F, F.one()), KPoly.zero(F)
        v0, v1 = KPoly.zero(F), KPoly.const(F, F.one())
        while not r1.is_zero():
            q, r = r0.quo_rem(r1)
            r0, r1 = r1, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        return r0, u0, v0

    def __call__(self, a):
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def derivative(self):
        return KPoly(self.field,
                     [self.coeffs[k] * self.field.from_int(k)
                      for k in range(1, len(self.coeffs))])

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            head = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            bits.append(f"({c})" + (f"*{head}" if head else ""))
        return " + ".join(bits)


# module-level operation names

def is_pth_power(K, a, j: int = 1):
    return K.is_pth_power(a, j)


def partial_derivative(K: RationalField, a: RatElem, i: int):
    return K.partial_derivative(a, i)


def adjoin_pth_root(K: RationalField, x: RatElem, name: str = "xi"):
    return SimpleInseparableExt(K, x, name)
