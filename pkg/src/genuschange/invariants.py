"""Inseparability invariants of a local branch.

The central quantity is q = sup over r in the ring of v(r^p - x),
measuring how closely x can be approximated by p-th powers.  It is
computed two independent ways: a hill climb that terminates with a
certificate, and a module distance over the subring of p-th powers.
From q follow the genus drop delta and the conductor of the base
changed branch, with combinatorial semigroup counts as cross checks.
The climb generalizes to p^j-th powers against moving targets, which
is what rewriting a presentation in normal form needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as _field

import numpy as np

from .ffield import FiniteField
from .basefield import RationalField
from .series import TruncatedSeries, PrecisionExhausted
from .localring import RingElement
from .dvrseries import (weighted_echelon, ModuleView, decompose_column,
                        row_weight)


@dataclass
class QWitness:
    """Result of the q climb: the target, the value, the best
    approximant r, the leading residue of r^(p^j) - x, why the climb
    stopped, and the (level, leading, extracted root) step log."""
    x: object
    q: object               # int, or math.inf for an exact root
    witness: object         # RingElement
    leading: object         # ResElem or None
    reason: str
    trace: list = _field(default_factory=list)


def _as_element(ring, x):
    if isinstance(x, RingElement):
        if x.ring is ring:
            return x
        return RingElement(ring, x.vec)
    return ring.from_base(x)


def q_invariant(ring, x, power: int = 1, cap: int = 4096,
                start=None) -> QWitness:
    """Climb to q = sup_r v(r^(p^power) - x).

    Each step cancels the leading term of d = r^m - x, m = p^power,
    which is possible exactly while m divides v(d) and the leading
    residue is an m-th power.  Either failure certifies the supremum
    is attained at the current r; x not a p-th power in the residue
    field certifies q = 0 at the first step.  Hensel backed rings are
    sharpened and retried when a valuation cannot be certified.
    """
    while True:
        try:
            return _q_climb(ring, _as_element(ring, x), power, cap,
                            None if start is None else
                            _as_element(ring, start))
        except PrecisionExhausted:
            floor = ring.relation_precision()
            if floor == math.inf or floor >= cap:
                raise
            ring = ring.at_precision(min(cap, 2 * floor))


def _q_climb(ring, x, power, cap, start) -> QWitness:
    m = ring.base.p ** power
    L = ring.residue_field()
    r = ring.zero() if start is None else start
    trace = []
    while True:
        d = r.pth_power(power) - x
        if d.known_zero():
            return QWitness(x, math.inf, r, None, "exact root", trace)
        q = d.valuation()
        if q > cap:
            raise ArithmeticError(
                f"q climbed past {cap}; x may be a p-th power")
        c = d.shift(-q).residue()
        if q % m:
            return QWitness(x, q, r, c, "level not divisible", trace)
        rho = L.pth_root(c, power)
        if rho is None:
            return QWitness(x, q, r, c, "residue not a root", trace)
        trace.append((q, c, rho))
        r = r - rho.lift().shift(q // m)


def iterated_q_invariants(ring, x, depth: int, cap: int = 4096):
    """QWitness for each power p^1 .. p^depth against the same x."""
    return [q_invariant(ring, x, power=j, cap=cap)
            for j in range(1, depth + 1)]


def brute_force_q(ring, x, power: int = 1, valuation_bound=None,
                  work_prec: int = 64):
    """q as a module distance, independent of the climb.

    The p^j-th powers of the ring form the module generated by
    (T^alpha)^(p^j) over series in S^(p^j) with coefficient p^j-th
    powers; the distance from x to it is q.  Returns an int, math.inf
    for members, or None when valuation_bound cuts the search first.
    """
    x = _as_element(ring, x)
    K = ring.base
    stride = K.p ** power

    def dec(c):
        return K.decompose_pth(c, power)

    cols = [decompose_column(ring.monomial(a).pth_power(power).to_column(),
                             dec, stride, K)
            for a in ring.basis]
    ech = weighted_echelon(K, cols, row_weight, stride, work_prec)
    mod = ModuleView(ech, allow_zero_cols=False)
    target = decompose_column(x.to_column(), dec, stride, K)
    return mod.distance(target, level_cap=valuation_bound)


# delta, conductor, and the genus step they control

def delta_formulas(p: int, q: int):
    """(e, f, delta, conductor_exponent, x_normal) after adjoining a
    p-th root of an invariant-q element.

    p coprime to q: the root enters through the uniformizer (e = p),
    otherwise through the residue field (f = p).  q = 0 means the root
    misses the residue field and the base change is already normal.
    """
    if q == 0:
        return 1, p, 0, 0, True
    if q % p:
        return p, 1, (p - 1) * (q - 1) // 2, (p - 1) * (q - 1), q == 1
    return 1, p, (p - 1) * q // 2, (p - 1) * q // p, False


@dataclass
class InvariantReport:
    p: int
    q: int
    e: int                  # ramification index of the normalized lift
    f: int                  # residue degree of the normalized lift
    delta: int
    conductor_exponent: int
    genus_step: int
    x_normal: bool
    oracle_confirmed: object = None     # True, or None when not run
    witness: QWitness = None


def delta_conductor(ring, x, confirm: bool = False,
                    cap: int = 4096) -> InvariantReport:
    """Full invariant package for adjoining x^(1/p) to the base field.

    With confirm=True the delta value is replayed against the
    normalization lattice oracle and a disagreement is an error.
    """
    w = q_invariant(ring, x, cap=cap)
    if w.q == math.inf:
        raise ValueError("x is a p-th power in the ring")
    p = ring.base.p
    e, f, delta, cond, xn = delta_formulas(p, w.q)
    genus_step = delta * (ring.D // p) if w.q else 0
    confirmed = None
    if confirm:
        from .normalize import delta_oracle
        oracle = delta_oracle(ring, x)
        if oracle != delta:
            raise ArithmeticError(
                f"oracle mismatch: formulas give delta {delta}, "
                f"lattice gives {oracle}")
        confirmed = True
    return InvariantReport(p, w.q, e, f, delta, cond, genus_step, xn,
                           confirmed, w)


def is_x_normal(ring, x, cap: int = 4096) -> bool:
    """Whether the base change by x^(1/p) is already normal."""
    w = q_invariant(ring, x, cap=cap)
    if w.q == math.inf:
        raise ValueError("x is a p-th power in the ring")
    return w.q in (0, 1)


# normal form extraction

@dataclass
class NormalFormGenerator:
    """Per generator data of a normal form presentation
    T^(p^n) = f(earlier) + u~ S^q - w~^p S^q', with the witness r'
    realizing q' and the defect unit u' = u~ S^(q-q') - w~^p."""
    name: str
    n: int
    q: int
    q_prime: int
    f_coeffs: dict          # exponent tuple -> base field element
    r_prime: object         # RingElement, the chosen lift
    u_tilde: object         # RingElement, unit
    w_tilde: object         # RingElement, zero when q = q'
    u_prime: object         # RingElement, unit


def extract_normal_form(ring, cap: int = 4096):
    """Rewrite each generator against its predecessors.

    For generator i with residue y_i: n_i is minimal with y_i^(p^n_i)
    in the subfield generated before it, f_i expresses that power over
    the monomial basis, q'_i is the best approximation order of f_i by
    p^(n_i)-th powers of lifts of y_i, and q_i the best order by p-th
    powers of lifts of y_i^(p^(n_i - 1)).  Returns one
    NormalFormGenerator per generator.
    """
    while True:
        try:
            return _extract(ring, cap)
        except PrecisionExhausted:
            floor = ring.relation_precision()
            if floor == math.inf or floor >= cap:
                raise
            ring = ring.at_precision(min(cap, 2 * floor))


def _extract(ring, cap):
    p = ring.base.p
    out = []
    witnesses = []
    for i in range(ring.nvars):
        # residues of basis monomials are the canonical basis of L, so
        # membership in K(y_1 .. y_{i-1}) is a support condition
        y_pow = ring.gen(i).residue()
        n, f_coeffs = 0, None
        while p ** (n + 1) <= ring.degrees[i]:
            y_pow = y_pow ** p
            n += 1
            if all(not any(a[i:]) for a in y_pow.vec):
                f_coeffs = dict(y_pow.vec)
                break
        if f_coeffs is None:
            raise ValueError(
                "residue tower is not purely inseparable over the base")
        if p ** n != ring.degrees[i]:
            raise ValueError(
                f"generator {ring.names[i]} has degree "
                f"{ring.degrees[i]} but inseparability exponent {n}")
        f_val = ring.zero()
        for a, c in f_coeffs.items():
            term = ring.from_base(c)
            for j, e in enumerate(a):
                if e:
                    term = term * witnesses[j] ** e
            f_val = f_val + term
        wq = _q_climb(ring, f_val, n, cap, None)
        if wq.q == math.inf:
            raise ValueError(
                f"generator {ring.names[i]} collapses into the "
                "previous subring")
        r_prime, q_prime = wq.witness, wq.q
        u_prime = (r_prime.pth_power(n) - f_val).shift(-q_prime)
        r0 = r_prime.pth_power(n - 1)
        wq1 = _q_climb(ring, f_val, 1, cap, r0)
        r1, q = wq1.witness, wq1.q
        u_tilde = (r1.pth_power() - f_val).shift(-q)
        if q < q_prime:
            raise AssertionError("q climbed below its q' floor")
        diff = r1 - r0
        if diff.known_zero():
            w_tilde = ring.zero()
        else:
            w_tilde = diff.shift(-(q_prime // p))
        defect = u_tilde.shift(q - q_prime) - w_tilde.pth_power()
        if not u_prime.agrees_with(defect):
            raise AssertionError("normal form defect identity failed")
        out.append(NormalFormGenerator(
            ring.names[i], n, q, q_prime, f_coeffs, r_prime,
            u_tilde, w_tilde, u_prime))
        witnesses.append(r_prime)
    return out


# combinatorial cross checks

def semigroup_gaps(a: int, b: int):
    """Gaps of the numerical semigroup <a, b> for coprime a, b."""
    if math.gcd(a, b) != 1:
        raise ValueError("generators must be coprime")
    limit = (a - 1) * (b - 1)
    reachable = set()
    for i in range(limit // a + 1):
        for j in range((limit - a * i) // b + 1):
            reachable.add(a * i + b * j)
    return [n for n in range(1, limit) if n not in reachable]


def staircase_count(p: int, step: int) -> int:
    """sum_{i=1}^{p-1} i*step: the residue-case gap count for q = p*step."""
    return step * (p - 1) * p // 2


def coin_dim_closed(m: int, n: int):
    """(gap count, conductor) of <m, n> in closed form."""
    if min(m, n) == 1:
        return 0, 0
    if math.gcd(m, n) != 1:
        raise ValueError("generators must be coprime")
    return (m - 1) * (n - 1) // 2, (m - 1) * (n - 1)


def coin_dim(m: int, n: int, gamma: dict, delta: dict, field,
             N=None):
    """Measured (gap count, conductor) of the subring generated by
    u = T^m gamma and v = T^n delta inside field[[T]].

    gamma and delta are unit series given as {exponent: coefficient}
    dicts over field.  All products u^i v^j with mi + nj < N are
    spanned and row reduced; the achieved valuations determine the
    gaps.  This measures, it does not assume the closed form.
    """
    if min(m, n) < 1:
        raise ValueError("generators must be positive")
    if min(m, n) == 1:
        return 0, 0
    if math.gcd(m, n) != 1:
        raise ValueError("generators must be coprime")
    if N is None:
        N = (m - 1) * (n - 1) + m + n
    if isinstance(field, FiniteField) and field.e == 1:
        pivots = _coin_pivots_prime(m, n, gamma, delta, field.p, N)
    else:
        pivots = _coin_pivots_generic(m, n, gamma, delta, field, N)
    gaps = sorted(set(range(N)) - set(pivots))
    if not gaps:
        return 0, 0
    return len(gaps), gaps[-1] + 1


def _unit_vector_prime(g: dict, lead: int, p: int, N: int) -> np.ndarray:
    vec = np.zeros(N, dtype=np.int64)
    for e, c in g.items():
        c = int(c) % p
        if e < 0:
            raise ValueError("unit series must be regular")
        if e + lead < N:
            vec[e + lead] = c
    if g.get(0, 0) % p == 0:
        raise ValueError("unit series must have invertible constant term")
    return vec


def _coin_pivots_prime(m, n, gamma, delta, p, N):
    u = _unit_vector_prime(gamma, m, p, N)
    v = _unit_vector_prime(delta, n, p, N)
    rows = []
    upow = np.zeros(N, dtype=np.int64)
    upow[0] = 1
    i = 0
    while i * m < N:
        w = upow.copy()
        j = 0
        while i * m + j * n < N:
            rows.append(w.copy())
            w = np.convolve(w, v)[:N] % p
            j += 1
        upow = np.convolve(upow, u)[:N] % p
        i += 1
    _, pivots = _echelon_mod_p(np.stack(rows), p)
    return pivots


def _coin_pivots_generic(m, n, gamma, delta, field, N):
    if isinstance(field, FiniteField):
        is_zero = field.is_zero
        add, mul, neg, inv = field.add, field.mul, field.neg, field.inv
    else:
        is_zero = lambda a: a.is_zero()
        add = lambda a, b: a + b
        mul = lambda a, b: a * b
        neg = lambda a: -a
        inv = lambda a: field.one() / a
    zero = field.zero()

    def series(g, lead):
        vec = [zero] * N
        for e, c in g.items():
            if e + lead < N:
                vec[e + lead] = c
        if is_zero(g.get(0, zero)):
            raise ValueError("unit series must have invertible constant")
        return vec

    def mul_vec(a, b):
        out = [zero] * N
        for i, x in enumerate(a):
            if is_zero(x):
                continue
            for j, y in enumerate(b):
                if i + j >= N:
                    break
                out[i + j] = add(out[i + j], mul(x, y))
        return out

    u, v = series(gamma, m), series(delta, n)
    rows = []
    upow = [zero] * N
    upow[0] = field.one()
    i = 0
    while i * m < N:
        w = list(upow)
        j = 0
        while i * m + j * n < N:
            rows.append(list(w))
            w = mul_vec(w, v)
            j += 1
        upow = mul_vec(upow, u)
        i += 1
    pivots = []
    for col in range(N):
        hot = None
        for ridx, row in enumerate(rows):
            if not is_zero(row[col]):
                hot = ridx
                break
        if hot is None:
            continue
        pivots.append(col)
        lead = rows.pop(hot)
        scale = inv(lead[col])
        lead = [mul(scale, c) for c in lead]
        for row in rows:
            if is_zero(row[col]):
                continue
            f = neg(row[col])
            for k in range(col, N):
                row[k] = add(row[k], mul(f, lead[k]))
    return pivots


def _echelon_mod_p(mat: np.ndarray, p: int):
    """(rank, pivot columns) of a matrix over F_p."""
    mat = np.array(mat, dtype=np.int64) % p
    rows, cols = mat.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(mat[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            mat[[r, piv]] = mat[[piv, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r] = (mat[r] * inv) % p
        pivots.append(c)
        below = np.nonzero(mat[r + 1:, c])[0] + r + 1
        if below.size:
            mat[below] = (mat[below]
                          - np.outer(mat[below, c], mat[r])) % p
        r += 1
    return r, pivots


def coin_dim_echelon(p: int, m: int, n: int, seed: int = 0,
                     perturb: int = 6) -> int:
    """Coin problem dimension via the weighted echelon engine.

    Columns are units times T^(jn) over F_p[[T^m]]; random higher
    perturbations exercise the clearing steps without moving the
    pivots, so the pivot formula must reproduce (m-1)(n-1)/2.
    """
    import random as _random
    if math.gcd(m, n) != 1:
        raise ValueError("generators must be coprime")
    K = RationalField(FiniteField(p), ["t"])
    rng = _random.Random(seed)
    cols = []
    for j in range(m):
        lead = j * n
        coeffs = {lead: 1}
        for _ in range(perturb):
            e = lead + rng.randrange(1, 3 * m * n)
            coeffs[e] = coeffs.get(e, 0) + rng.randrange(p)
        col: dict = {}
        for e, cv in coeffs.items():
            c = K.from_int(cv)
            if c.is_zero():
                continue
            k, r = divmod(e, m)
            col.setdefault(r, {})[k] = c
        cols.append({r: TruncatedSeries(K, d, math.inf)
                     for r, d in col.items()})
    ech = weighted_echelon(K, cols, lambda r: r, m, work_prec=4 * n)
    if ech.zero_cols:
        raise ArithmeticError("perturbed generators collapsed")
    wvals = ech.pivot_weighted_vals()
    if len({w % m for w in wvals}) != m:
        raise ArithmeticError("pivots do not cover all residues mod m")
    return sum(w // m for w in wvals)
