"""Truncated sparse power series in one variable S over a coefficient field.

A series is a dict {exponent: coefficient} plus a precision bound: the
object represents sum c_k S^k + O(S^prec).  Exact polynomials carry
prec = math.inf.  Coefficients are wrapped field elements supporting
+, -, *, /, ==, and ** with int exponents; the owning field object
supplies zero(), one() and the characteristic.

Nothing here ever decides "is zero" from truncated data alone: a series
with no stored terms below its precision only certifies valuation
>= prec.  Exact zero claims must come from exact (prec = inf) inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision schedule for stable_compute."""
    start: int = 16
    cap: int = 1024


class PrecisionExhausted(ArithmeticError):
    """Raised when a quantity fails to stabilize below the precision cap."""


class TruncatedSeries:
    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field, coeffs: dict, prec):
        self.field = field
        if prec != math.inf:
            prec = int(prec)
            if prec < 0:
                prec = 0
        self.prec = prec
        self.coeffs = {k: c for k, c in coeffs.items()
                       if k < prec and not c.is_zero()}

    # constructors

    @classmethod
    def zero(cls, field, prec=math.inf):
        return cls(field, {}, prec)

    @classmethod
    def one(cls, field, prec=math.inf):
        return cls(field, {0: field.one()}, prec)

    @classmethod
    def monomial(cls, field, k: int, coeff=None, prec=math.inf):
        c = field.one() if coeff is None else coeff
        return cls(field, {k: c}, prec)

    @classmethod
    def constant(cls, field, c, prec=math.inf):
        return cls(field, {0: c}, prec)

    # inspection

    def is_exact(self) -> bool:
        return self.prec == math.inf

    def known_zero(self) -> bool:
        """True only for the exact zero series."""
        return self.is_exact() and not self.coeffs

    def valuation_lb(self):
        """min stored exponent, or prec when no term is stored.

        This is a certified lower bound for the true valuation and is
        the exact valuation whenever it is < prec.
        """
        return min(self.coeffs) if self.coeffs else self.prec

    def valuation(self):
        """Exact valuation, or None when not certified below prec."""
        v = self.valuation_lb()
        return v if v < self.prec else None

    def coeff(self, k: int):
        if k >= self.prec:
            raise PrecisionExhausted(f"coefficient of S^{k} beyond O(S^{self.prec})")
        return self.coeffs.get(k, self.field.zero())

    def degree(self):
        """Largest stored exponent; None for no terms."""
        return max(self.coeffs) if self.coeffs else None

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return TruncatedSeries(self.field, out, min(self.prec, other.prec))

    def __neg__(self):
        return TruncatedSeries(self.field, {k: -c for k, c in self.coeffs.items()},
                               self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        va, vb = self.valuation_lb(), other.valuation_lb()
        prec = min(self.prec + vb, other.prec + va, self.prec + other.prec)
        out = {}
        zero = self.field.zero()
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k >= prec:
                    continue
                s = out.get(k, zero) + a * b
                out[k] = s
        return TruncatedSeries(self.field, out, prec)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(self.field, other)

    def scale(self, c):
        return TruncatedSeries(self.field, {k: v * c for k, v in self.coeffs.items()},
                               self.prec)

    def shift(self, k: int):
        """Multiply by S^k; k < 0 demands known divisibility by S^(-k)."""
        if k < 0 and self.coeffs and min(self.coeffs) < -k:
            raise ValueError(f"series not divisible by S^{-k}")
        return TruncatedSeries(self.field, {e + k: c for e, c in self.coeffs.items()},
                               self.prec + k)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return TruncatedSeries(self.field, self.coeffs, prec)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use unit_inverse for negative powers")
        result = TruncatedSeries.one(self.field, prec=math.inf)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def pth_power(self, j: int = 1):
        """p^j-th power via the additive Frobenius, exponent by exponent."""
        p = self.field.p
        m = p ** j
        out = {k * m: c ** m for k, c in self.coeffs.items()}
        return TruncatedSeries(self.field, out, self.prec * m)

    def map_coeffs(self, fn, field=None, stretch: int = 1):
        """New series with coefficients fn(c); exponents scale by stretch."""
        field = field or self.field
        return TruncatedSeries(field, {k * stretch: fn(c) for k, c in self.coeffs.items()},
                               self.prec * stretch)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __repr__(self):
        terms = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                terms.append(f"({c})")
            else:
                terms.append(f"({c})*S^{k}" if k != 1 else f"({c})*S")
        if self.prec != math.inf:
            terms.append(f"O(S^{self.prec})")
        return " + ".join(terms) if terms else "0"


def unit_inverse(u: TruncatedSeries, prec: int) -> TruncatedSeries:
    """Inverse of a unit series mod S^prec by Newton iteration.

    w <- w*(2 - u*w) doubles the number of correct terms per step.
    """
    c0 = u.coeff(0)
    if c0.is_zero():
        raise ZeroDivisionError("series has positive valuation, not a unit")
    field = u.field
    u = u.truncate(prec)
    w = TruncatedSeries.constant(field, field.one() / c0, prec=1)
    two = TruncatedSeries.constant(field, field.one() + field.one())
    n = 1
    while n < prec:
        n = min(2 * n, prec)
        w = TruncatedSeries(field, w.coeffs, n)
        w = (w * (two - u.truncate(n) * w)).truncate(n)
    return w


def divide_units(a: TruncatedSeries, u: TruncatedSeries, prec: int) -> TruncatedSeries:
    """a / u mod S^prec for a unit u."""
    return (a.truncate(prec) * unit_inverse(u, prec)).truncate(prec)


def stable_compute(fn, config: PrecisionConfig = PrecisionConfig()):
    """Evaluate fn(N) at doubling precisions until two consecutive calls agree.

    fn may return None to signal "undecided at this precision"; None
    never counts as agreement.  Raises PrecisionExhausted past the cap.
    """
    prev = None
    N = config.start
    while N <= config.cap:
        cur = fn(N)
        if cur is not None and prev is not None and cur == prev:
            return cur
        prev = cur
        N *= 2
    raise PrecisionExhausted(
        f"no stable value up to precision {config.cap} (last: {prev!r})")
