"""Finite coefficient fields F_q, q = p^e, with explicit Frobenius inverse.

Field elements are plain hashable values: ints in range(p) for prime
fields, tuples of e ints (coefficients of 1, g, ..., g^(e-1)) for
extensions F_p[g]/(modulus).  A FiniteField object owns the arithmetic;
elements carry no reference back to it, so they can be used freely as
dict keys in sparse polynomials.
"""

from __future__ import annotations


def _poly_trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(f, g, mod, p):
    # product of coefficient lists modulo (mod, p); mod is monic
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _poly_rem(out, mod, p)


def _poly_rem(f, mod, p):
    f = list(f)
    d = len(mod) - 1
    while len(f) > d:
        c = f[-1] % p
        if c:
            off = len(f) - 1 - d
            for i in range(d):
                f[off + i] = (f[off + i] - c * mod[i]) % p
        f.pop()
    return _poly_trim(f)


def _poly_powmod(f, n, mod, p):
    result = [1]
    base = _poly_rem(f, mod, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        n >>= 1
    return result


def _poly_gcd(f, g, p):
    f, g = _poly_trim(list(f)), _poly_trim(list(g))
    while g:
        inv = pow(g[-1], p - 2, p)
        scaled = [(c * inv) % p for c in g]
        f = _poly_rem(f, scaled, p)
        f, g = g, f
    return f


def _poly_sub(f, g, p):
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p
           for i in range(n)]
    return _poly_trim(out)


def _is_irreducible(mod, p):
    """Rabin test for a monic polynomial over F_p."""
    e = len(mod) - 1
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p ** e, mod, p), x, p):
        return False
    primes = set()
    m = e
    d = 2
    while d * d <= m:
        while m % d == 0:
            primes.add(d)
            m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for r in primes:
        diff = _poly_sub(_poly_powmod(x, p ** (e // r), mod, p), x, p)
        g = _poly_gcd(list(mod), diff, p) if diff else list(mod)
        if len(g) - 1 != 0:
            return False
    return True


def find_irreducible(p: int, e: int) -> tuple:
    """First monic irreducible of degree e over F_p, by coefficient order.

    Deterministic, so two fields F_{p^e} built independently agree.
    """
    if e == 1:
        return (0, 1)
    bound = p ** e
    for code in range(bound):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise ValueError(f"no irreducible of degree {e} over F_{p}")


class FiniteField:
    """Arithmetic for F_{p^e}.  Prime subfield values are plain ints."""

    def __init__(self, p: int, e: int = 1, modulus=None):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            self.modulus = None
        else:
            self.modulus = tuple(modulus) if modulus is not None else find_irreducible(p, e)
            if len(self.modulus) != e + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")

    def __repr__(self):
        return f"F_{self.q}" if self.e > 1 else f"F_{self.p}"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.e == other.e and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # element constructors

    def zero(self):
        return 0 if self.e == 1 else (0,) * self.e

    def one(self):
        return 1 if self.e == 1 else (1,) + (0,) * (self.e - 1)

    def from_int(self, n: int):
        n %= self.p
        return n if self.e == 1 else (n,) + (0,) * (self.e - 1)

    def gen(self):
        """The class of g in F_p[g]/(modulus); only for e > 1."""
        if self.e == 1:
            raise ValueError("prime field has no generator element")
        return (0, 1) + (0,) * (self.e - 2)

    def element(self, coeffs):
        """Element from an int or an iterable of ints (coeffs of g^i)."""
        if isinstance(coeffs, int):
            return self.from_int(coeffs)
        v = [c % self.p for c in coeffs]
        if self.e == 1:
            if len(v) > 1 and any(v[1:]):
                raise ValueError("too many coefficients for a prime field")
            return v[0] if v else 0
        if len(v) > self.e:
            raise ValueError("too many coefficients")
        v += [0] * (self.e - len(v))
        return tuple(v)

    def is_zero(self, a):
        return a == 0 if self.e == 1 else not any(a)

    # arithmetic

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        prod = _poly_mulmod(list(a), list(b), list(self.modulus), self.p)
        prod += [0] * (self.e - len(prod))
        return tuple(prod)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        # a^(q-2) = a^(-1); fields here are tiny so powmod is fine
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.e == 1:
            return pow(a, n, self.p)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    # Frobenius

    def frobenius(self, a, j: int = 1):
        """a^(p^j); j may be negative since Frobenius has order e."""
        j %= self.e
        return self.pow(a, self.p ** j)

    def pth_root(self, a, j: int = 1):
        """The unique p^j-th root; finite fields are perfect."""
        return self.frobenius(a, -j)

    def nth_root(self, a, n: int):
        """Some b with b^n = a, or None.  Brute force, small fields only."""
        if self.q > 4096:
            raise ValueError("nth_root is brute force, field too large")
        for b in self.iter_elements():
            if self.pow(b, n) == a:
                return b
        return None

    def iter_elements(self):
        if self.e == 1:
            yield from range(self.p)
            return
        for code in range(self.q):
            v = []
            c = code
            for _ in range(self.e):
                v.append(c % self.p)
                c //= self.p
            yield tuple(v)

    def str_of(self, a) -> str:
        if self.e == 1:
            return str(a)
        terms = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "g" if i == 1 else f"g^{i}"
                terms.append(head if c == 1 else f"{c}*{head}")
        return "+".join(terms) if terms else "0"
