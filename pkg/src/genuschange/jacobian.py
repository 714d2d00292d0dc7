"""Continuous Kaehler differentials of a presented local ring.

The differential module of R = K[[S]][T_1..T_m]/(P_1..P_m) is the
cokernel of the m x (m+1) matrix J whose i-th row lists the formal
partials (dP_i/dS, dP_i/dT_1, .., dP_i/dT_m); the derivation is
K-linear, so base field coefficients contribute nothing.  Over the
fraction field the module is one dimensional and all the interesting
structure sits in its torsion part, measured here twice:

  * a Smith normal form over R itself, which is a discrete valuation
    ring, so valuation-pivoted elimination terminates with one
    elementary divisor per relation, and

  * the first Fitting ideal, spanned over K[[S]] by the maximal minors
    of J times the monomial basis, whose quotient dimension falls out
    of a column echelon.

Both counts measure the same torsion dimension and must agree exactly;
any gap is a hard error, never a warning.  That dimension also splits
along the chain of degree-p base changes, one summand per generator of
the base field, with each summand given by a closed form in the
approximation invariant q.  The chain bookkeeping is replayed against
the differential computation at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import TruncatedSeries, PrecisionConfig, PrecisionExhausted
from .localring import PresentationError
from .dvrseries import weighted_echelon, run_certified
from .normalize import full_genus_change


def _series_derivative(srs: TruncatedSeries) -> TruncatedSeries:
    """d/dS of a series; knowledge drops by one order."""
    field = srs.field
    coeffs = {}
    for k, c in srs.coeffs.items():
        if k % field.p == 0:
            continue
        coeffs[k - 1] = c * field.from_int(k)
    prec = srs.prec if srs.prec == math.inf else max(int(srs.prec) - 1, 0)
    return TruncatedSeries(field, coeffs, prec)


def _require_inseparable_residue(pres) -> None:
    """Reject residue fields with a separable part.

    Every closed form downstream assumes the residue field is purely
    inseparable over the base, which for a triangular presentation
    means each relation reduces at S = 0 to a pure equation
    T_i^(p^n) = (element of the subfield below).  A degree that is not
    a power of p, or a surviving lower power of T_i, hands the residue
    field a separable part.
    """
    p = pres.base.p
    for i, rel in enumerate(pres.relations):
        d = pres.degrees[i]
        red = d
        while red % p == 0:
            red //= p
        if red != 1:
            raise PresentationError(
                f"residue field has a separable part: relation {i} has "
                f"degree {d}, not a power of the characteristic {p}")
        for a, c in rel.items():
            if a[i] >= d:
                continue
            if a[i] and not c.coeff(0).is_zero():
                raise PresentationError(
                    f"residue field has a separable part: relation {i} "
                    f"keeps {pres.names[i]}^{a[i]} at S = 0")


@dataclass
class OmegaPresentation:
    """Relation matrix of the continuous differentials.

    One row per relation, one column per coordinate of d: the S-column
    first, then one column per polynomial generator.  The module is
    the cokernel of the column span in R^(m+1); its generic rank is
    one, so exactly one column survives elimination.
    """
    ring: object
    matrix: list

    @property
    def m(self) -> int:
        return len(self.matrix)


def omega_matrix(pres) -> OmegaPresentation:
    """Formal partials of every relation, reduced into the ring.

    Exponents divisible by the characteristic drop their terms, and
    base field coefficients differentiate to zero, so rows routinely
    lose entries; what remains determines the torsion completely.
    """
    _require_inseparable_residue(pres)
    rows = []
    for i, rel in enumerate(pres.relations):
        ds = {a: _series_derivative(c) for a, c in rel.items()}
        row = [pres.element(ds)]
        for j in range(pres.nvars):
            row.append(pres.relation_derivative(i, j))
        rows.append(row)
    return OmegaPresentation(pres, rows)


def _support_degree(z) -> int:
    return max((sum(a) for a in z.vec), default=0)


def smith_over_dvr(J: list, N: int) -> list:
    """Elementary divisor exponents of a matrix over the ring.

    The ring is a discrete valuation ring with uniformizer S, so the
    entry of globally minimal valuation divides every other entry;
    inverting its unit part, clearing its row and column, and recursing
    yields one pivot per row.  Ties are broken toward the smallest
    polynomial support, then position, keeping the pivot sequence
    reproducible.  Unit pivots witness free summands and are dropped
    from the returned list.

    A leftover row with only exact zeros means the cokernel has rank
    beyond one and the input is rejected; a row that died only to
    finite precision raises PrecisionExhausted instead.
    """
    rows = [list(r) for r in J]
    exps = []
    while rows:
        best = None
        floor = math.inf
        for ri, row in enumerate(rows):
            for ci, z in enumerate(row):
                if z.known_zero():
                    continue
                try:
                    v = z.valuation()
                except PrecisionExhausted:
                    floor = min(floor, z.precision_floor())
                    continue
                key = (v, _support_degree(z), ri, ci)
                if best is None or key < best:
                    best = key
        if best is None:
            if floor == math.inf:
                raise ArithmeticError(
                    "rank deficiency beyond 1: "
                    f"{len(rows)} rows left with no nonzero entry")
            raise PrecisionExhausted(
                f"no pivot certified below precision {floor}")
        v, _, ri, ci = best
        if v >= floor:
            raise PrecisionExhausted(
                f"pivot at valuation {v} not certified below floor {floor}")
        pivot_row = rows.pop(ri)
        unit = pivot_row[ci].shift(-v)
        avail = unit.precision_floor()
        w = N if avail == math.inf else min(N, int(avail))
        if w < 1:
            raise PrecisionExhausted(
                f"unit part of the pivot known only to O(S^{avail})")
        uinv = unit.unit_inverse(w)
        for row in rows:
            c = row[ci]
            if not c.known_zero():
                # exact elimination kills row[ci] identically; the
                # other entries inherit the multiplier's precision
                f = c.shift(-v) * uinv
                for cj in range(len(row)):
                    if cj != ci:
                        row[cj] = row[cj] - f * pivot_row[cj]
            del row[ci]
        exps.append(v)
    return sorted(e for e in exps if e)


def _det(mat: list, pres):
    n = len(mat)
    if n == 0:
        return pres.one()
    if n == 1:
        return mat[0][0]
    out = pres.zero()
    for j in range(n):
        entry = mat[0][j]
        if entry.known_zero():
            continue
        sub = [[row[c] for c in range(n) if c != j] for row in mat[1:]]
        term = entry * _det(sub, pres)
        out = out - term if j % 2 else out + term
    return out


def _fitting_dim(om: OmegaPresentation, N: int) -> int:
    """dim_K of R modulo the ideal of maximal minors of J.

    The ideal, viewed over K[[S]], is spanned by the minors times every
    basis monomial; a column echelon makes the span triangular, and the
    quotient dimension is the sum of the pivot valuations.
    """
    pres = om.ring
    m = om.m
    minors = []
    for j in range(m + 1):
        sub = [[row[c] for c in range(m + 1) if c != j] for row in om.matrix]
        minors.append(_det(sub, pres))
    cols = []
    for g in minors:
        if g.known_zero():
            continue
        for beta in pres.basis:
            col = (g * pres.monomial(beta)).to_column()
            if col:
                cols.append(col)
    ech = weighted_echelon(pres.base, cols, lambda r: 0, 1, work_prec=N)
    if len(ech.pivots) < pres.D:
        if ech.zero_floor != math.inf:
            raise PrecisionExhausted(
                f"minor span certified only above level {ech.zero_floor}")
        raise ArithmeticError(
            f"minor ideal spans rank {len(ech.pivots)} < {pres.D}: "
            "rank deficiency beyond 1")
    return sum(p.weighted_val for p in ech.pivots)


@dataclass
class JacobianReport:
    elementary_divisor_exponents: list
    jac: int
    torsion_dim: int
    route: str
    precision: int


def jac_number(pres, cap: int = 4096, work_prec=None) -> JacobianReport:
    """The Jacobian number of the ring over its base field.

    Computed twice: the Smith route reads [L:K] times the sum of the
    elementary divisor exponents, the Fitting route measures the
    quotient by the minor ideal directly.  Both equal the dimension of
    the torsion of the differential module, so a mismatch is reported
    as an error, not reconciled.  Precision is escalated until every
    pivot is certified.
    """
    start = max(16, work_prec) if work_prec else 64

    def attempt(N):
        try:
            cur = pres.at_precision(N)
        except PrecisionExhausted:
            cur = pres
        om = omega_matrix(cur)
        exps = smith_over_dvr(om.matrix, N)
        jac = cur.D * sum(exps)
        fit = _fitting_dim(om, N)
        if fit != jac:
            raise ArithmeticError(
                f"jacobian routes disagree: elementary divisors give "
                f"{jac}, the minor ideal gives {fit}")
        return JacobianReport(exps, jac, jac, "smith", N)

    return run_certified(attempt, PrecisionConfig(start=start, cap=cap))


def kernel_dims_along_chain(pres, chain=None, cap: int = 4096,
                            full=None, jac=None) -> list:
    """Torsion contributed by each step of the degree-p chain.

    Walking the base field's generators in order, the step for x with
    invariant q contributes index * p * q when p divides q and
    index * p * (q - 1) when it does not; a step with q = 0 contributes
    nothing.  Every contribution is compared against the lattice
    measurement of that step's genus change, and the total must equal
    the torsion dimension of the differential module, computed
    independently.  chain optionally supplies replacement presentations
    for steps the rebuild does not cover, keyed by generator name.
    full and jac accept reports already computed for this presentation
    so a caller holding both does not pay for the walks twice.
    """
    report = full if full is not None else full_genus_change(
        pres, replacements=chain, cap=cap)
    target = jac if jac is not None else jac_number(pres, cap=cap)
    p = pres.base.p
    dims = []
    for step in report.steps:
        if step.q == 0:
            dims.append(0)
            continue
        k = step.q if step.q % p == 0 else step.q - 1
        kdim = step.index * p * k
        if (p - 1) * kdim != 2 * p * step.g:
            raise ArithmeticError(
                f"step {step.name}: kernel dimension {kdim} is "
                f"incompatible with the measured genus change {step.g}")
        dims.append(kdim)
    total = sum(dims)
    if total != target.jac:
        raise ArithmeticError(
            f"kernel dimensions sum to {total}, the torsion dimension "
            f"is {target.jac}")
    return dims
