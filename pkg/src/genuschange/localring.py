"""Complete local rings, presented as finite free modules over K[[S]].

A ring here is R = K[[S]][T_1, .., T_m] / (P_1, .., P_m) with every P_i
monic in T_i and involving only T_1, .., T_i.  R is then free over
O = K[[S]] on the monomials T^alpha with alpha_i < deg P_i, and every
element is a sparse coordinate vector of truncated series.  The S-adic
module valuation v(z) = max {k : z in S^k R} is the minimum coordinate
valuation.

Relations are either exact polynomials or realized on demand to a given
precision from a Hensel factorization of a plane curve; see
HenselRecipe.  All arithmetic keeps honest per-coefficient precision.
"""

from __future__ import annotations

import itertools
import math

from .series import TruncatedSeries, PrecisionExhausted
from .linalg import LinearSolver
from .basefield import KPoly


class PresentationError(ValueError):
    """The given relations do not present a local ring of the kind we
    handle: triangular, monic, with a field at S = 0."""


class LocalRingPresentation:

    def __init__(self, base, relations, names=None):
        """relations: one dict {exponent tuple: TruncatedSeries} per
        generator, monic triangular; exponent tuples have one slot per
        generator."""
        self.base = base
        self.nvars = len(relations)
        if names is None:
            names = ["T"] if self.nvars == 1 else [
                f"T{i + 1}" for i in range(self.nvars)]
        self.names = list(names)
        self.relations = [dict(r) for r in relations]
        self.degrees = []
        self.tails = []
        for i, rel in enumerate(self.relations):
            d = 0
            for a, c in rel.items():
                if len(a) != self.nvars:
                    raise ValueError("exponent arity mismatch")
                if any(a[j] for j in range(i + 1, self.nvars)):
                    raise ValueError(
                        f"relation {i} uses a later generator")
                d = max(d, a[i])
            if d < 1:
                raise ValueError(f"relation {i} has degree 0 in {names[i]}")
            monic_key = tuple(d if j == i else 0 for j in range(self.nvars))
            lead = rel.get(monic_key)
            if lead is None or lead.prec != math.inf \
                    or lead.coeffs != {0: base.one()}:
                raise ValueError(f"relation {i} is not exactly monic")
            tail = {}
            for a, c in rel.items():
                if a == monic_key:
                    continue
                if a[i] >= d:
                    raise ValueError(
                        f"relation {i} has a stray degree-{a[i]} term")
                for j in range(i):
                    if a[j] >= self.degrees[j]:
                        raise ValueError(
                            f"relation {i} tail not reduced in {names[j]}")
                tail[a] = -c
            self.degrees.append(d)
            self.tails.append(tail)
        self.D = 1
        for d in self.degrees:
            self.D *= d
        self.basis = list(itertools.product(*[range(d) for d in self.degrees]))
        self._residue_field = None
        self._mono_cache = {}
        self.recipe = None

    def __repr__(self):
        return (f"LocalRing({self.base!r}; {', '.join(self.names)}; "
                f"rank {self.D})")

    def relation_precision(self):
        """Smallest precision among relation coefficients."""
        floor = math.inf
        for rel in self.relations:
            for c in rel.values():
                floor = min(floor, c.prec)
        return floor

    def at_precision(self, prec: int) -> "LocalRingPresentation":
        """This presentation with relations honest to O(S^prec).

        Exact presentations are their own refinement; Hensel-backed ones
        re-lift.  Anything else cannot be sharpened after the fact."""
        if self.relation_precision() >= prec:
            return self
        if self.recipe is not None:
            return self.recipe.presentation(prec)
        raise PrecisionExhausted(
            "presentation precision cannot be raised without a recipe")

    # constructors

    def element(self, terms: dict) -> "RingElement":
        return RingElement(self, self._reduce(terms))

    def zero(self):
        return RingElement(self, {})

    def one(self):
        z = tuple([0] * self.nvars)
        return RingElement(self, {z: TruncatedSeries.one(self.base)})

    def from_int(self, n: int):
        return self.from_base(self.base.from_int(n))

    def from_base(self, a):
        if a.is_zero():
            return self.zero()
        z = tuple([0] * self.nvars)
        return RingElement(self, {z: TruncatedSeries.constant(self.base, a)})

    def from_series(self, srs: TruncatedSeries):
        z = tuple([0] * self.nvars)
        return self.element({z: srs})

    def gen(self, i: int = 0):
        a = tuple(1 if j == i else 0 for j in range(self.nvars))
        return self.element({a: TruncatedSeries.one(self.base)})

    def uniformizer(self):
        """The series variable S as a ring element."""
        z = tuple([0] * self.nvars)
        return RingElement(
            self, {z: TruncatedSeries.monomial(self.base, 1)})

    def monomial(self, alpha):
        return self.element({tuple(alpha): TruncatedSeries.one(self.base)})

    # reduction modulo the triangular relations

    def _reduce(self, terms: dict) -> dict:
        cur = {}
        degs = self.degrees
        for a, c in terms.items():
            if not c.coeffs and c.prec == math.inf:
                continue
            if all(x < d for x, d in zip(a, degs)):
                cur[a] = cur[a] + c if a in cur else c
                continue
            for b, m in self._mono_reduced(a).items():
                delta = c * m
                cur[b] = cur[b] + delta if b in cur else delta
        return {a: s for a, s in cur.items()
                if s.coeffs or s.prec != math.inf}

    def _mono_reduced(self, alpha) -> dict:
        """Image of the bare monomial T^alpha, memoized per instance.

        The rewrite chains of high powers repeat across elements (and
        across the columns of every saturation pass), so sharing them
        is worth the memory.  Recursion depth is bounded by the total
        rewrite length, about max(alpha)."""
        hit = self._mono_cache.get(alpha)
        if hit is not None:
            return hit
        degs = self.degrees
        for i in range(self.nvars - 1, -1, -1):
            if alpha[i] >= degs[i]:
                break
        rest = alpha[:i] + (alpha[i] - degs[i],) + alpha[i + 1:]
        out = {}
        for b, tc in self.tails[i].items():
            nb = tuple(x + y for x, y in zip(rest, b))
            if all(x < d for x, d in zip(nb, degs)):
                out[nb] = out[nb] + tc if nb in out else tc
                continue
            for bb, m in self._mono_reduced(nb).items():
                delta = tc * m
                out[bb] = out[bb] + delta if bb in out else delta
        self._mono_cache[alpha] = out
        return out

    # residue field and homomorphisms

    def residue_field(self) -> "ResidueField":
        if self._residue_field is None:
            self._residue_field = ResidueField(self)
        return self._residue_field

    def evaluate_series(self, srs: TruncatedSeries, z: "RingElement",
                        base_map=None):
        """srs(z) for a ring element z with positive valuation."""
        vlb = z.valuation_lb()
        if vlb < 1:
            raise ValueError("substitution point must have valuation >= 1")
        out = self.zero()
        power = self.one()
        cur = 0
        for k in sorted(srs.coeffs):
            power = power * z ** (k - cur)
            cur = k
            c = srs.coeffs[k]
            if base_map is not None:
                c = base_map(c)
            out = out + power.scale(c)
        if srs.prec != math.inf:
            out = out.truncate(int(srs.prec) * vlb)
        return out

    def map_element(self, z: "RingElement", target: "LocalRingPresentation",
                    s_image: "RingElement", gen_images, base_map=None):
        """Image of z under S -> s_image, T_i -> gen_images[i].

        base_map carries coefficients into target.base; identity when
        omitted."""
        out = target.zero()
        for a, srs in z.vec.items():
            term = target.evaluate_series(srs, s_image, base_map)
            for i, e in enumerate(a):
                if e:
                    term = term * gen_images[i] ** e
            out = out + term
        return out

    def relation_derivative(self, i: int, j: int) -> "RingElement":
        """dP_i/dT_j as a ring element."""
        terms: dict = {}
        for a, c in self.relations[i].items():
            e = a[j]
            if e % self.base.p == 0:
                continue
            na = a[:j] + (e - 1,) + a[j + 1:]
            delta = c.scale(self.base.from_int(e))
            terms[na] = terms[na] + delta if na in terms else delta
        return self.element(terms)


class RingElement:
    __slots__ = ("ring", "vec")

    def __init__(self, ring, vec: dict):
        self.ring = ring
        self.vec = vec

    def _coerce(self, other):
        if isinstance(other, RingElement):
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.vec)
        for a, s in other.vec.items():
            out[a] = out[a] + s if a in out else s
        out = {a: s for a, s in out.items()
               if s.coeffs or s.prec != math.inf}
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {a: -s for a, s in self.vec.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for a, sa in self.vec.items():
            for b, sb in other.vec.items():
                k = tuple(x + y for x, y in zip(a, b))
                delta = sa * sb
                terms[k] = terms[k] + delta if k in terms else delta
        return self.ring.element(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def pth_power(self, j: int = 1):
        m = self.ring.base.p ** j
        terms = {tuple(x * m for x in a): s.pth_power(j)
                 for a, s in self.vec.items()}
        return self.ring.element(terms)

    def unit_inverse(self, prec: int):
        """Inverse of a unit, honest to O(S^prec): Newton iteration
        seeded with the residue inverse."""
        if self.precision_floor() < prec:
            raise PrecisionExhausted(
                f"unit inverse to O(S^{prec}) needs operand known there")
        L = self.ring.residue_field()
        w = L.inv(self.residue()).lift()
        steps = max(1, prec).bit_length() + 1
        for _ in range(steps):
            err = (self.ring.one() - self * w).truncate(prec)
            if err.valuation_lb() >= prec:
                return w.truncate(prec)
            w = (w + w * err).truncate(prec)
        raise AssertionError("unit inverse did not converge")

    def scale(self, c):
        """Multiply by a base field element."""
        if c.is_zero():
            return self.ring.zero()
        return RingElement(self.ring,
                           {a: s.scale(c) for a, s in self.vec.items()})

    def scale_series(self, srs: TruncatedSeries):
        out = {a: s * srs for a, s in self.vec.items()}
        return RingElement(self.ring, {a: s for a, s in out.items()
                                       if s.coeffs or s.prec != math.inf})

    def shift(self, k: int):
        """Multiply by S^k; k < 0 demands coordinate-wise divisibility."""
        return RingElement(self.ring,
                           {a: s.shift(k) for a, s in self.vec.items()})

    def truncate(self, prec):
        out = {a: s.truncate(prec) for a, s in self.vec.items()}
        return RingElement(self.ring, {a: s for a, s in out.items()
                                       if s.coeffs or s.prec != math.inf})

    # valuation and residues

    def known_zero(self) -> bool:
        return not self.vec

    def valuation_lb(self):
        if not self.vec:
            return math.inf
        return min(s.valuation_lb() for s in self.vec.values())

    def precision_floor(self):
        floors = [s.prec for s in self.vec.values() if s.prec != math.inf]
        return min(floors) if floors else math.inf

    def valuation(self):
        """Certified S-adic valuation; math.inf only for the exact zero."""
        if not self.vec:
            return math.inf
        best = None
        for s in self.vec.values():
            v = s.valuation()
            if v is not None:
                best = v if best is None else min(best, v)
        floor = self.precision_floor()
        if best is not None and best < floor:
            return best
        raise PrecisionExhausted(
            f"valuation not certified below precision {floor}")

    def coeff(self, alpha):
        return self.vec.get(tuple(alpha),
                            TruncatedSeries.zero(self.ring.base))

    def residue(self):
        """Image in the residue field R/(S, ..)."""
        L = self.ring.residue_field()
        vec = {}
        for a, s in self.vec.items():
            c = s.coeff(0)
            if not c.is_zero():
                vec[a] = c
        return ResElem(L, vec)

    def to_column(self) -> dict:
        """Engine view: {basis exponent: series}."""
        return dict(self.vec)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.vec == other.vec

    def agrees_with(self, other) -> bool:
        """No certified difference; True does not certify equality."""
        diff = self - other
        return all(s.valuation() is None for s in diff.vec.values())

    def __repr__(self):
        if not self.vec:
            return "0"
        names = self.ring.names
        parts = []
        for a in sorted(self.vec):
            mono = "*".join(f"{names[i]}^{e}" if e > 1 else names[i]
                            for i, e in enumerate(a) if e)
            s = f"({self.vec[a]})"
            parts.append(f"{s}*{mono}" if mono else s)
        return " + ".join(parts)


class ResElem:
    """Element of the residue field, coordinates over the ring basis."""

    __slots__ = ("field", "vec")

    def __init__(self, field, vec: dict):
        self.field = field
        self.vec = {a: c for a, c in vec.items() if not c.is_zero()}

    def is_zero(self):
        return not self.vec

    def _coerce(self, other):
        if isinstance(other, ResElem):
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.vec)
        for a, c in other.vec.items():
            out[a] = out[a] + c if a in out else c
        return ResElem(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return ResElem(self.field, {a: -c for a, c in self.vec.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.field.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * self.field.inv(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.field.inv(self) ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, ResElem):
            return NotImplemented
        return self.vec == other.vec

    def lift(self) -> RingElement:
        ring = self.field.ring
        return RingElement(ring, {
            a: TruncatedSeries.constant(ring.base, c)
            for a, c in self.vec.items()})

    def __repr__(self):
        return repr(self.lift()) if self.vec else "0"


class ResidueField:
    """R/(S): a finite extension of the base, dim = rank of R.

    For a genuinely local presentation this is a field; mul uses cached
    basis products, inv and p-th roots solve small linear systems.
    """

    def __init__(self, ring: LocalRingPresentation):
        self.ring = ring
        self.K = ring.base
        self.p = ring.base.p
        self.dim = ring.D
        self.basis = ring.basis
        self._prod_cache: dict = {}
        self._frob_cols = None

    def zero(self):
        return ResElem(self, {})

    def one(self):
        z = tuple([0] * self.ring.nvars)
        return ResElem(self, {z: self.K.one()})

    def from_int(self, n: int):
        return self.from_base(self.K.from_int(n))

    def from_base(self, c):
        z = tuple([0] * self.ring.nvars)
        return ResElem(self, {z: c})

    def gen(self, i: int = 0):
        return self.ring.gen(i).residue()

    def element(self, vec: dict):
        return ResElem(self, dict(vec))

    def _basis_product(self, a, b):
        key = (a, b) if a <= b else (b, a)
        out = self._prod_cache.get(key)
        if out is None:
            w = self.ring.element(
                {tuple(x + y for x, y in zip(a, b)):
                 TruncatedSeries.one(self.K)})
            out = {al: s.coeff(0) for al, s in w.vec.items()
                   if not s.coeff(0).is_zero()}
            self._prod_cache[key] = out
        return out

    def mul(self, x: ResElem, y: ResElem) -> ResElem:
        out: dict = {}
        for a, ca in x.vec.items():
            for b, cb in y.vec.items():
                f = ca * cb
                for al, m in self._basis_product(a, b).items():
                    d = f * m
                    out[al] = out[al] + d if al in out else d
        return ResElem(self, out)

    def inv(self, x: ResElem) -> ResElem:
        if x.is_zero():
            raise ZeroDivisionError("residue zero")
        cols = []
        for b in self.basis:
            prod = self.mul(x, ResElem(self, {b: self.K.one()}))
            cols.append(prod.vec)
        zero = self.K.zero()
        rows = [[cols[j].get(a, zero) for j in range(self.dim)]
                for a in self.basis]
        rhs = [self.one().vec.get(a, zero) for a in self.basis]
        sol = LinearSolver(self.K, rows).solve(rhs)
        if sol is None:
            raise ArithmeticError(
                "noninvertible nonzero residue; presentation is not local")
        return ResElem(self, {b: c for b, c in zip(self.basis, sol)})

    # p-th powers: semilinear solves over the base

    def _frobenius_columns(self):
        if self._frob_cols is None:
            cols = []
            for b in self.basis:
                w = self.ring.monomial(b).pth_power().residue()
                col = {}
                for a, c in w.vec.items():
                    for e, r in self.K.decompose_pth(c).items():
                        col[(a, e)] = r
                cols.append(col)
            self._frob_cols = cols
        return self._frob_cols

    def pth_root(self, x: ResElem, j: int = 1):
        """y with y^(p^j) = x, or None when x is not a p^j-th power."""
        cur = x
        for _ in range(j):
            cur = self._pth_root_once(cur)
            if cur is None:
                return None
        return cur

    def _pth_root_once(self, x: ResElem):
        cols = self._frobenius_columns()
        rhs_map = {}
        for a, c in x.vec.items():
            for e, r in self.K.decompose_pth(c).items():
                rhs_map[(a, e)] = r
        keys = set(rhs_map)
        for col in cols:
            keys.update(col)
        keys = sorted(keys, key=repr)
        zero = self.K.zero()
        rows = [[col.get(k, zero) for col in cols] for k in keys]
        rhs = [rhs_map.get(k, zero) for k in keys]
        sol = LinearSolver(self.K, rows).solve(rhs)
        if sol is None:
            return None
        return ResElem(self, {b: c for b, c in zip(self.basis, sol)})

    def is_pth_power(self, x: ResElem, j: int = 1) -> bool:
        return self.pth_root(x, j) is not None

    def frobenius_injective(self) -> bool:
        """Whether z -> z^p has trivial kernel, i.e. no nilpotent of
        order p.  For pure inseparable towers this settles fieldness."""
        from .linalg import matrix_rank
        cols = self._frobenius_columns()
        keys = set()
        for col in cols:
            keys.update(col)
        keys = sorted(keys, key=repr)
        zero = self.K.zero()
        rows = [[col.get(k, zero) for col in cols] for k in keys]
        return matrix_rank(self.K, rows) == self.dim

    def diagnose(self) -> bool:
        """Cheap sanity check that this really is a field: invert the
        basis monomials and a dense combination."""
        for b in self.basis:
            x = ResElem(self, {b: self.K.one()})
            self.inv(x)
        dense = ResElem(self, {b: self.K.from_int(i + 1)
                               for i, b in enumerate(self.basis)})
        self.inv(dense)
        return True


# polynomials in one outer variable with series coefficients, dense;
# only what quadratic Hensel lifting needs

def _yp_trim(f):
    while f and f[-1].known_zero():
        f.pop()
    return f


def _yp_add(f, g):
    n = max(len(f), len(g))
    out = []
    for k in range(n):
        if k < len(f) and k < len(g):
            out.append(f[k] + g[k])
        elif k < len(f):
            out.append(f[k])
        else:
            out.append(g[k])
    return _yp_trim(out)


def _yp_neg(f):
    return [-c for c in f]


def _yp_sub(f, g):
    return _yp_add(f, _yp_neg(g))


def _yp_mul(f, g, field):
    if not f or not g:
        return []
    out = [TruncatedSeries.zero(field) for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        if a.known_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return _yp_trim(out)


def _yp_mod_s(f, n, field):
    """Truncate exponents to < S^n, keeping exact representatives."""
    return _yp_trim([
        TruncatedSeries(field, {k: c for k, c in srs.coeffs.items() if k < n},
                        math.inf)
        for srs in f])


def _yp_quo_rem(f, g, field):
    """Division by g with exactly invertible constant-series lead."""
    lead = g[-1]
    if len(lead.coeffs) != 1 or 0 not in lead.coeffs \
            or lead.prec != math.inf:
        raise ValueError("divisor lead must be an exact constant")
    ilead = field.one() / lead.coeffs[0]
    r = list(f)
    dq = len(f) - len(g)
    if dq < 0:
        return [], _yp_trim(r)
    q = [TruncatedSeries.zero(field) for _ in range(dq + 1)]
    for k in range(len(r) - 1, len(g) - 2, -1):
        c = r[k].scale(ilead)
        q[k - len(g) + 1] = c
        if c.known_zero():
            continue
        for j, gc in enumerate(g):
            r[k - len(g) + 1 + j] = r[k - len(g) + 1 + j] - c * gc
    return _yp_trim(q), _yp_trim(r[:len(g) - 1])


def _yp_min_val(f):
    vals = [s.valuation_lb() for s in f if s.coeffs]
    return min(vals) if vals else math.inf


class HenselRecipe:
    """Monic plane curve f(S, Y) split along a factorization at S = 0.

    f is a list of exact series, index = Y-degree; b0 is the monic
    KPoly factor of f(0, Y) cutting out the branch of interest, coprime
    to its cofactor.  realize(n) lifts f = A*B mod S^n quadratically
    and returns the branch factor B; presentation(n) wraps it as a one
    generator local ring."""

    def __init__(self, base, f, b0: KPoly):
        self.base = base
        if any(c.prec != math.inf for c in f):
            raise ValueError("curve coefficients must be exact")
        lead = f[-1]
        if lead.coeffs != {0: base.one()}:
            raise ValueError("curve must be monic in Y")
        self.f = list(f)
        f0 = KPoly(base, [c.coeffs.get(0, base.zero()) for c in f])
        a0, rem = f0.quo_rem(b0)
        if not rem.is_zero():
            raise ValueError("b0 does not divide f(0, Y)")
        g, u, v = a0.xgcd(b0)
        if g.degree() != 0:
            raise ValueError("factors of f(0, Y) are not coprime")
        c = base.one() / g.coeff(0)
        u, v = u.scale(c), v.scale(c)

        def lift(kp):
            return [TruncatedSeries.constant(base, kp.coeff(k))
                    for k in range(kp.degree() + 1)]

        self._A, self._B = lift(a0), lift(b0)
        self._u, self._v = lift(u), lift(v)
        self.branch_degree = b0.degree()
        self._prec = 1

    def realize(self, prec: int):
        """Branch factor coefficients, honest to O(S^prec)."""
        F = self.base
        f = self.f
        while self._prec < prec:
            # clamp the last round: a lift from O(S^m) is good to any
            # target <= 2m, and overshooting doubles the dense work
            n2 = min(self._prec * 2, prec)
            A, B, u, v = self._A, self._B, self._u, self._v
            e = _yp_mod_s(_yp_sub(f, _yp_mul(A, B, F)), n2, F)
            if _yp_min_val(e) < self._prec:
                raise AssertionError("lift invariant broken")
            q, r = _yp_quo_rem(_yp_mod_s(_yp_mul(u, e, F), n2, F), B, F)
            Bn = _yp_mod_s(_yp_add(B, r), n2, F)
            An, rem = _yp_quo_rem(f, Bn, F)
            An = _yp_mod_s(An, n2, F)
            if _yp_min_val(_yp_mod_s(rem, n2, F)) < self._prec:
                raise AssertionError("cofactor division failed")
            delta = _yp_mod_s(
                _yp_sub(_yp_add(_yp_mul(self._u, An, F),
                                _yp_mul(self._v, Bn, F)),
                        [TruncatedSeries.one(F)]), n2, F)
            one_minus = _yp_sub([TruncatedSeries.one(F)], delta)
            w = _yp_mod_s(_yp_mul(self._u, one_minus, F), n2, F)
            q2, un = _yp_quo_rem(w, Bn, F)
            vn = _yp_mod_s(
                _yp_add(_yp_mul(self._v, one_minus, F),
                        _yp_mul(q2, An, F)), n2, F)
            self._A, self._B, self._u, self._v = An, Bn, un, vn
            self._prec = n2
        d = self.branch_degree
        out = []
        for k in range(d + 1):
            srs = self._B[k] if k < len(self._B) else \
                TruncatedSeries.zero(F)
            if k == d:
                out.append(TruncatedSeries.one(F))
            else:
                out.append(TruncatedSeries(F, srs.coeffs, prec))
        return out

    def presentation(self, prec: int) -> LocalRingPresentation:
        B = self.realize(prec)
        rel = {(k,): c for k, c in enumerate(B)
               if c.coeffs or c.prec != math.inf}
        pres = LocalRingPresentation(self.base, [rel])
        pres.recipe = self
        return pres


def check_presentation(base, relations=None, names=None) \
        -> LocalRingPresentation:
    """Validate a presentation and return it; raise PresentationError
    with the offending condition otherwise.

    Accepts either an already built LocalRingPresentation or the raw
    (base, relations) data.  Besides the structural checks, the residue
    ring is screened for fieldness: basis monomials and a dense probe
    must invert, and Frobenius must be injective.
    """
    if isinstance(base, LocalRingPresentation):
        pres = base
    else:
        try:
            pres = LocalRingPresentation(base, relations, names)
        except ValueError as exc:
            msg = str(exc)
            if "monic" in msg or "stray" in msg:
                raise PresentationError(f"not monic: {msg}") from exc
            raise PresentationError(f"not triangular: {msg}") from exc
    L = pres.residue_field()
    try:
        L.diagnose()
    except (ArithmeticError, ZeroDivisionError) as exc:
        raise PresentationError(f"not a field at S=0: {exc}") from exc
    if not L.frobenius_injective():
        raise PresentationError("not a field at S=0: nilpotents present")
    return pres


def hensel_prepare(base, f, b0: KPoly, prec: int) -> LocalRingPresentation:
    """Local ring of the branch of a monic plane curve.

    f is the curve as a list of exact series (index = Y-degree), b0 the
    monic factor of f(0, Y) cutting out the branch.  The branch factor
    is lifted to O(S^prec); the result carries its recipe, so
    at_precision can sharpen it later.
    """
    try:
        recipe = HenselRecipe(base, f, b0)
    except ValueError as exc:
        if "coprime" in str(exc):
            raise PresentationError("factors not coprime mod S") from exc
        raise
    return check_presentation(recipe.presentation(prec))


def residue_is_pth_power(L: ResidueField, c: ResElem, k: int = 1) -> bool:
    """Whether c has a p^k-th root in the residue field."""
    return L.is_pth_power(c, k)
