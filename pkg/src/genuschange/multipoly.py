"""Sparse multivariate polynomials over a finite field.

Terms are a dict {exponent tuple: field value}; the coefficient field is
a ffield.FiniteField and values are its raw elements.  Exponent tuples
all have length nvars.  Monomial order, where one is needed (division,
leading terms), is lex with the last variable most significant.
"""

from __future__ import annotations

from .ffield import FiniteField


class MPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FiniteField, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if not field.is_zero(c)}

    @classmethod
    def _raw(cls, field, nvars, terms):
        # trusted constructor: terms must already be zero-free
        self = cls.__new__(cls)
        self.field = field
        self.nvars = nvars
        self.terms = terms
        return self

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {})

    @classmethod
    def const(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def from_int(cls, field, nvars, n: int):
        return cls.const(field, nvars, field.from_int(n))

    @classmethod
    def var(cls, field, nvars, i: int, exp: int = 1):
        e = [0] * nvars
        e[i] = exp
        return cls(field, nvars, {tuple(e): field.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self):
        if not self.terms:
            return self.field.zero()
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms[(0,) * self.nvars]

    def degree(self, i: int) -> int:
        """Degree in variable i; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # ring operations

    def _check(self, other):
        if self.field is not other.field and self.field != other.field:
            raise ValueError("mixed polynomial rings")
        if self.nvars != other.nvars:
            raise ValueError("mixed polynomial rings")

    def __add__(self, other):
        self._check(other)
        F = self.field
        add = F.add
        zero = F.is_zero
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = add(out[e], c)
                if zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MPoly._raw(F, self.nvars, out)

    def __neg__(self):
        F = self.field
        neg = F.neg
        return MPoly._raw(F, self.nvars,
                          {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        self._check(other)
        F = self.field
        sub = F.sub
        neg = F.neg
        zero = F.is_zero
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = sub(out[e], c)
                if zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = neg(c)
        return MPoly._raw(F, self.nvars, out)

    def __mul__(self, other):
        self._check(other)
        F = self.field
        a, b = self.terms, other.terms
        if not a or not b:
            return MPoly._raw(F, self.nvars, {})
        if len(a) == 1:
            a, b = b, a
        if len(b) == 1:
            # term products in a field cannot vanish
            ((e2, c2),) = b.items()
            mul = F.mul
            if not any(e2):
                return MPoly._raw(F, self.nvars,
                                  {e: mul(c, c2) for e, c in a.items()})
            return MPoly._raw(F, self.nvars,
                              {tuple(x + y for x, y in zip(e, e2)):
                               mul(c, c2) for e, c in a.items()})
        mul = F.mul
        add = F.add
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = mul(c1, c2)
                out[e] = add(out[e], prod) if e in out else prod
        return MPoly(F, self.nvars, out)

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return MPoly._raw(F, self.nvars, {})
        mul = F.mul
        return MPoly._raw(F, self.nvars,
                          {e: mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(self.field, self.nvars, self.field.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    # calculus and Frobenius

    def derivative(self, i: int):
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            k = F.mul(c, F.from_int(e[i]))
            if F.is_zero(k):
                continue
            e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[e2] = F.add(out[e2], k) if e2 in out else k
        return MPoly(F, self.nvars, out)

    def pth_root(self, j: int = 1):
        """The p^j-th root, or None when there is none.

        Over F_q[t] a polynomial is a p-th power exactly when every
        exponent is divisible by p (coefficients always have roots).
        """
        m = self.field.p ** j
        out = {}
        for e, c in self.terms.items():
            if any(x % m for x in e):
                return None
            out[tuple(x // m for x in e)] = self.field.pth_root(c, j)
        return MPoly(self.field, self.nvars, out)

    def frobenius(self, j: int = 1):
        """The p^j-th power, via exponent scaling."""
        m = self.field.p ** j
        out = {tuple(x * m for x in e): self.field.pow(c, m)
               for e, c in self.terms.items()}
        return MPoly(self.field, self.nvars, out)

    def scale_exponents(self, i: int, num: int, den: int = 1):
        """Map t_i^k to t_i^(k*num/den); requires exact divisibility."""
        out = {}
        for e, c in self.terms.items():
            k = e[i] * num
            if k % den:
                raise ValueError(f"exponent {e[i]} of variable {i} not divisible")
            out[e[:i] + (k // den,) + e[i + 1:]] = c
        return MPoly(self.field, self.nvars, out)

    def subs(self, i: int, value: "MPoly"):
        """Substitute value for variable i (value in the same ring)."""
        self._check(value)
        result = MPoly.zero(self.field, self.nvars)
        powers = {0: MPoly.const(self.field, self.nvars, self.field.one())}
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value ** k
            rest = MPoly(self.field, self.nvars, {e[:i] + (0,) + e[i + 1:]: c})
            result = result + rest * powers[k]
        return result

    def coeff_of_var_power(self, i: int, k: int):
        """The coefficient of t_i^k, a polynomial not involving t_i."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return MPoly(self.field, self.nvars, out)

    # division and gcd

    def _lt(self):
        """Leading (exponent, coeff) under lex, last variable major."""
        e = max(self.terms, key=lambda t: t[::-1])
        return e, self.terms[e]

    def divexact(self, g: "MPoly"):
        """Quotient self/g, raising ValueError when division is inexact."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        F = self.field
        rem = MPoly(F, self.nvars, dict(self.terms))
        quo = {}
        ge, gc = g._lt()
        gcinv = F.inv(gc)
        while not rem.is_zero():
            re, rc = rem._lt()
            qe = tuple(a - b for a, b in zip(re, ge))
            if any(x < 0 for x in qe):
                raise ValueError("inexact polynomial division")
            qc = F.mul(rc, gcinv)
            quo[qe] = qc
            rem = rem - MPoly(F, self.nvars, {qe: qc}) * g
        return MPoly(F, self.nvars, quo)

    def divides(self, f: "MPoly") -> bool:
        try:
            f.divexact(self)
            return True
        except ValueError:
            return False

    def monic_lex(self):
        """Scale so the lex leading coefficient is 1."""
        if self.is_zero():
            return self
        _, c = self._lt()
        return self.scale(self.field.inv(c))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda t: t[::-1], reverse=True):
            c = self.terms[e]
            mono = "*".join(f"t{i}^{k}" if k > 1 else f"t{i}"
                            for i, k in enumerate(e) if k)
            cs = self.field.str_of(c)
            bits.append(f"{cs}*{mono}" if mono and cs != "1" else (mono or cs))
        return " + ".join(bits)


def _main_var(f: MPoly, g: MPoly):
    """Highest-index variable occurring in f or g, or None."""
    for i in reversed(range(f.nvars)):
        if f.degree(i) > 0 or g.degree(i) > 0:
            return i
    return None


def _as_univar(f: MPoly, i: int):
    """Coefficient list in variable i, entries MPolys without t_i."""
    d = f.degree(i)
    return [f.coeff_of_var_power(i, k) for k in range(max(d, 0) + 1)]


def content(f: MPoly, i: int) -> MPoly:
    """gcd of the coefficients of f viewed in K[...][t_i]."""
    c = MPoly.zero(f.field, f.nvars)
    for coeff in _as_univar(f, i):
        c = gcd(c, coeff)
        if c.is_constant() and not c.is_zero():
            break
    return c


def _prem(f, g, i):
    """Pseudo remainder of f by g in variable i."""
    df, dg = f.degree(i), g.degree(i)
    lg = g.coeff_of_var_power(i, dg)
    while not f.is_zero() and f.degree(i) >= dg:
        df = f.degree(i)
        lf = f.coeff_of_var_power(i, df)
        shift = MPoly.var(f.field, f.nvars, i, df - dg)
        f = f * lg - g * lf * shift
    return f


def gcd(f: MPoly, g: MPoly) -> MPoly:
    """Polynomial gcd, normalized to lex leading coefficient 1."""
    if f.is_zero():
        return g.monic_lex()
    if g.is_zero():
        return f.monic_lex()
    i = _main_var(f, g)
    if i is None:
        return MPoly.const(f.field, f.nvars, f.field.one())
    cf, cg = content(f, i), content(g, i)
    pf, pg = f.divexact(cf), g.divexact(cg)
    cont = gcd(cf, cg)
    if pf.degree(i) < pg.degree(i):
        pf, pg = pg, pf
    # primitive polynomial remainder sequence in t_i
    while True:
        r = _prem(pf, pg, i)
        if r.is_zero():
            break
        if r.degree(i) <= 0:
            # t_i-free remainder: pf, pg coprime as polynomials in t_i
            return cont.monic_lex()
        pf, pg = pg, r.divexact(content(r, i))
    return (cont * pg.divexact(content(pg, i))).monic_lex()
