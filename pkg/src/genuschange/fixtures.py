"""Worked families of unibranch curve germs with frozen invariants.

Each fixture bundles a presentation R = K[[S]][T]/(...) with the
integers it is expected to produce: the q-values of the first two
roots of t, ramification and residue degrees of both steps, the
genus drops, the Jacobian number and the elementary divisor of the
differential module.  The checking code recomputes every number by
its own route; this table is the hand-computed reference.

Four families realize the four ramification patterns of a two-step
analysis, and two more realize the strict branches of the last two
patterns, which need either a second base parameter or a second
staircase degree to appear.  corpus() returns the standard grid.
random_normal_forms() adds seeded presentations in structure normal
form without reference values; they feed the two-route agreement
checks, which need none.
"""

import math
import random
from dataclasses import dataclass, field as dcfield

from .ffield import FiniteField
from .basefield import RationalField, KPoly, RenamedRootExtension
from .series import TruncatedSeries
from .localring import LocalRingPresentation, hensel_prepare

# relation precision for prepared fixtures; recipes regrow on demand
HENSEL_PREC = 8

# keys pinned by hand from the worked normalizations; the rest of the
# expected table follows from them by the closed formulas
ANCHOR_KEYS = ("q1", "q2", "case")


def _step(p, q):
    """(e, f, delta) of one step, restated locally on purpose: the
    fixture table must not lean on the code it is checked against."""
    if q % p:
        return p, 1, (p - 1) * (q - 1) // 2
    return 1, p, (p - 1) * q // 2


def _expected(p, D, q1, q2):
    e1, f1, d1 = _step(p, q1)
    e2, f2, d2 = _step(p, q2)
    index1 = D // p
    D2 = D * f1 // p
    index2 = D2 // p
    g10 = d1 * index1
    g21 = d2 * index2
    jac = 2 * p * g10 // (p - 1)
    case = {(True, True): 1, (True, False): 2,
            (False, False): 3, (False, True): 4}[(e1 == p, e2 == p)]
    kdim = index1 * p * (q1 if q1 % p == 0 else q1 - 1)
    return {
        "p": p, "D": D, "D2": D2, "case": case,
        "q1": q1, "q2": q2, "e1": e1, "f1": f1, "e2": e2, "f2": f2,
        "delta10": d1, "delta21": d2, "index1": index1, "index2": index2,
        "g10": g10, "g21": g21, "gfull": g10,
        "jac": jac, "exps": [jac // D], "kdims": [kdim],
    }


@dataclass
class Fixture:
    """A presentation together with its reference invariants.

    expected is keyed like TwoStepReport fields plus D, D2, gfull,
    jac, exps and kdims.  tags marks each key "anchor" (pinned by
    hand) or "derived" (follows by the closed formulas).  step2,
    when present, is the re-presentation after adjoining t^(1/p),
    for the towers the rank-p rebuild does not cover.
    """
    family: str
    label: str
    p: int
    params: dict
    ring: LocalRingPresentation
    expected: dict
    step2: LocalRingPresentation = None
    xslot: int = 0
    tags: dict = dcfield(default_factory=dict)

    def __post_init__(self):
        if not self.tags:
            self.tags = {k: "anchor" if k in ANCHOR_KEYS else "derived"
                         for k in self.expected}

    @property
    def x(self):
        return self.ring.base.gen(self.xslot)

    @property
    def step2_pair(self):
        """Argument for a two-step analysis: None means rebuild."""
        if self.step2 is None:
            return None
        return self.step2, self.step2.base.gen(self.xslot)

    @property
    def replacements(self):
        """Argument for a full chain walk: None means rebuild."""
        if self.step2 is None:
            return None
        return {self.ring.base.names[self.xslot]: self.step2}


def _grid_check(p, n):
    if n < 2 or n % p == 0:
        raise ValueError(f"need n >= 2 prime to p, got n={n} at p={p}")


def fam1(p, n, coeff=None, tag=""):
    """Both steps ramified: T^(p^2) = t + S^n with n prime to p.

    q(t) = n, and the second step repeats the same staircase one
    level down, so q(t^(1/p)) = n as well: the (p, p) pattern.
    """
    _grid_check(p, n)
    K = RationalField(coeff or FiniteField(p), ["t"])
    t = K.gen(0)
    rel = {
        (p * p,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, n: -K.one()}, math.inf),
    }
    ring = LocalRingPresentation(K, [rel])
    ext = RenamedRootExtension(K, 0)
    K2 = ext.ext
    rel2 = {
        (p,): TruncatedSeries.one(K2),
        (0,): TruncatedSeries(K2, {0: -ext.root(), n: -K2.one()}, math.inf),
    }
    step2 = LocalRingPresentation(K2, [rel2])
    return Fixture("fam1", f"fam1-p{p}-n{n}{tag}", p, {"n": n}, ring,
                   _expected(p, p * p, n, n), step2=step2)


def fam2(p, n):
    """Ramified then inert: Y^(p^2+p) - t Y^p = S^(p+n) - S^p.

    The unit S^n - 1 hides the staircase until one correction is
    spent, so q(t) = p + n.  After the first root the climb stops at
    q(t^(1/p)) = p against a unit whose residue has no p-th root:
    the (p, 1) pattern, with a genuinely inert second step.
    """
    _grid_check(p, n)
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    one = K.one()
    zero = TruncatedSeries.zero(K)
    f = [zero] * (p * p + p + 1)
    f[0] = TruncatedSeries(K, {p: one, p + n: -one}, math.inf)
    f[p] = TruncatedSeries.constant(K, -t)
    f[p * p + p] = TruncatedSeries.one(K)
    b0 = KPoly(K, [-t] + [K.zero()] * (p * p - 1) + [one])
    ring = hensel_prepare(K, f, b0, HENSEL_PREC)

    ext = RenamedRootExtension(K, 0)
    K2 = ext.ext
    r = ext.root()
    one2 = K2.one()
    f2 = [TruncatedSeries.zero(K2)] * (p + 2)
    f2[0] = TruncatedSeries(K2, {p: one2, p + n: -one2}, math.inf)
    f2[1] = TruncatedSeries.constant(K2, -r)
    f2[p + 1] = TruncatedSeries.one(K2)
    b2 = KPoly(K2, [-r] + [K2.zero()] * (p - 1) + [one2])
    step2 = hensel_prepare(K2, f2, b2, HENSEL_PREC)
    return Fixture("fam2", f"fam2-p{p}-n{n}", p, {"n": n}, ring,
                   _expected(p, p * p, p + n, p), step2=step2)


def fam3(p):
    """Both steps inert, equality branch: Y^(p+1) = t Y + S^(p^2).

    q(t) = p^2 and q(t^(1/p)) = p, so p*q2 = q1 and the delta and
    genus equalities of the (1, 1) pattern transfer along it.
    """
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    one = K.one()
    f = [TruncatedSeries(K, {p * p: -one}, math.inf),
         TruncatedSeries.constant(K, -t)]
    f += [TruncatedSeries.zero(K)] * (p - 1)
    f.append(TruncatedSeries.one(K))
    b0 = KPoly(K, [-t] + [K.zero()] * (p - 1) + [one])
    ring = hensel_prepare(K, f, b0, HENSEL_PREC)
    return Fixture("fam3", f"fam3-p{p}", p, {}, ring,
                   _expected(p, p, p * p, p))


def fam3prime(p):
    """Strict branch of the (1, 1) pattern, which needs a second
    base parameter: over K = k(s, t) take

        Y^p = S^(p^3) Y - s^p S^(p^2) + t.

    The s^p term blocks the climb from reaching S^(p^3) in one hop,
    pinning q(t) = p^3, while q(t^(1/p)) = p; p*q2 < q1 is strict.
    """
    K = RationalField(FiniteField(p), ["s", "t"])
    s, t = K.gen(0), K.gen(1)
    rel = {
        (p,): TruncatedSeries.one(K),
        (1,): TruncatedSeries(K, {p ** 3: -K.one()}, math.inf),
        (0,): TruncatedSeries(K, {0: -t, p * p: s ** p}, math.inf),
    }
    ring = LocalRingPresentation(K, [rel])
    exp = _expected(p, p, p ** 3, p)
    exp["kdims"] = [0] + exp["kdims"]
    return Fixture("fam3prime", f"fam3prime-p{p}", p, {}, ring, exp,
                   xslot=1)


def fam4(p, n):
    """Inert then ramified, equality branch: Y^(p+1) = t Y + S^(np).

    q(t) = np with p*q2 = q1, so the (1, p) staircase correction
    p(p-1)/2 lands exactly on the genus equality.
    """
    _grid_check(p, n)
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    one = K.one()
    f = [TruncatedSeries(K, {n * p: -one}, math.inf),
         TruncatedSeries.constant(K, -t)]
    f += [TruncatedSeries.zero(K)] * (p - 1)
    f.append(TruncatedSeries.one(K))
    b0 = KPoly(K, [-t] + [K.zero()] * (p - 1) + [one])
    ring = hensel_prepare(K, f, b0, HENSEL_PREC)
    return Fixture("fam4", f"fam4-p{p}-n{n}", p, {"n": n}, ring,
                   _expected(p, p, n * p, n))


def fam4prime(p, n, m):
    """Strict branch of the (1, p) pattern, via a second staircase
    degree: Y^(p+1) - t Y + S^(np) Y = S^(mp) with m > n.

    The S^(np) Y term caps the second staircase at n while the first
    runs to q(t) = mp, so p*q2 = np < mp is strict.
    """
    _grid_check(p, n)
    if m <= n:
        raise ValueError(f"need m > n, got m={m}, n={n}")
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    one = K.one()
    f = [TruncatedSeries(K, {m * p: -one}, math.inf),
         TruncatedSeries(K, {0: -t, n * p: one}, math.inf)]
    f += [TruncatedSeries.zero(K)] * (p - 1)
    f.append(TruncatedSeries.one(K))
    b0 = KPoly(K, [-t] + [K.zero()] * (p - 1) + [one])
    ring = hensel_prepare(K, f, b0, HENSEL_PREC)
    return Fixture("fam4prime", f"fam4prime-p{p}-n{n}-m{m}", p,
                   {"n": n, "m": m}, ring, _expected(p, p, m * p, n))


def _m_above(p, n):
    # smallest m > n whose staircase p*m stays clear of the second one
    return n + 1 if (n + 1) % p else n + 2


def corpus():
    """The standard grid: every family at p in {2, 3, 5}, n running
    over 2..4 prime to p, m picked just above n.  One fam1 instance
    uses a degree-2 coefficient field; mathematically nothing changes,
    it pins the arithmetic plumbing for non-prime fields."""
    out = []
    for p in (2, 3, 5):
        for n in range(2, 5):
            if n % p == 0:
                continue
            out.append(fam1(p, n))
            out.append(fam2(p, n))
            out.append(fam4(p, n))
            out.append(fam4prime(p, n, _m_above(p, n)))
        out.append(fam3(p))
        out.append(fam3prime(p))
    out.append(fam1(3, 2, coeff=FiniteField(3, 2), tag="-f9"))
    return out


def by_label(label):
    for f in corpus():
        if f.label == label:
            return f
    raise KeyError(f"no fixture labelled {label!r}")


FAMILIES = {
    "fam1": fam1, "fam2": fam2, "fam3": fam3,
    "fam3prime": fam3prime, "fam4": fam4, "fam4prime": fam4prime,
}


def random_normal_forms(p, count=20, seed=20260819, qmax=12):
    """Seeded presentations in structure normal form, rank p to p^2.

    Every tail carries a term c*S^a with a prime to p, which pins
    q(t) <= a and keeps the ring a domain; optional terms at levels
    divisible by p below a force the q climb to do real work before
    it hits the wall.  Two-variable towers put the smaller prime-to-p
    level on the top relation, so neither relation can be absorbed.
    Returns (label, presentation) pairs; no reference values.
    """
    rng = random.Random(seed * 1000003 + p)
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    one = K.one()
    pool = [one, t, t + one, t * t + t]
    nonp = [k for k in range(2, qmax + 1) if k % p]

    def tail(top, low_room):
        # top: the prime-to-p level; below it, optional p-divisible play
        coeffs = {0: -t, top: -rng.choice(pool)}
        if low_room and rng.random() < 0.6:
            b = rng.choice(range(p, top, p))
            coeffs[b] = -rng.choice(pool)
        if rng.random() < 0.4:
            coeffs[top + rng.randint(1, 3)] = -rng.choice(pool)
        return coeffs

    out = []
    for i in range(count):
        if rng.random() < 0.7:
            nu = 1 if rng.random() < 0.6 else 2
            a = rng.choice(nonp)
            rel = {
                (p ** nu,): TruncatedSeries.one(K),
                (0,): TruncatedSeries(K, tail(a, a > p), math.inf),
            }
            ring = LocalRingPresentation(K, [rel])
        else:
            a2 = rng.choice([k for k in nonp if k < max(nonp)])
            a1 = rng.choice([k for k in nonp if k > a2])
            rel1 = {
                (p, 0): TruncatedSeries.one(K),
                (0, 0): TruncatedSeries(K, tail(a1, a1 > p), math.inf),
            }
            rel2 = {
                (0, p): TruncatedSeries.one(K),
                (1, 0): TruncatedSeries.constant(K, -one),
                (0, 0): TruncatedSeries(K, {a2: -rng.choice(pool)},
                                        math.inf),
            }
            ring = LocalRingPresentation(K, [rel1, rel2])
        out.append((f"nf-p{p}-{i:02d}", ring))
    return out
