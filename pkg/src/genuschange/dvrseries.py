"""Column reduction over the power series DVR with weighted rows.

The shared engine behind p-th power distance computations, lattice
dimensions and differential kernels.  A "column" is a sparse vector of
truncated series in one variable sigma over a coefficient field F:
{row key: TruncatedSeries}.  Rows carry integer weights 0 <= wt <
stride via a weight function, and the weighted valuation of a column is

    wval = min over rows of (stride * (sigma-valuation) + wt(row)).

This is the valuation induced by S on modules encoded over the subring
F[[sigma]], sigma = S^stride.  Echelonization picks pivots by global
minimal weighted valuation, which makes division by the pivot always
valid and gives level-by-level slice independence: for every level
below the precision floor, the slices of the shifted echelon columns
that can touch that level are linearly independent over F.  Greedy
level solvers built on top are therefore complete, and a certified
unsolvable level is a true module distance.

Precision is tracked honestly: every entry carries its own O(sigma^n)
bound, and any decision that would need coefficients at or beyond the
combined bound raises PrecisionExhausted instead of guessing.  Callers
with exact inputs rerun at doubled working precision via run_certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import (TruncatedSeries, PrecisionConfig, PrecisionExhausted,
                     unit_inverse)
from .linalg import LinearSolver


@dataclass
class Pivot:
    col: int          # index into the original column list
    row: object
    sigma_val: int
    weighted_val: int


@dataclass
class EchelonResult:
    field: object
    stride: int
    wt: object            # weight function on row keys
    pivots: list          # list of Pivot, in processing order
    columns: list         # echelonized pivot columns, aligned with pivots
    zero_cols: list       # original indices that vanished to their precision
    zero_floor: float     # zero columns are certified zero below this level

    def pivot_weighted_vals(self):
        return [p.weighted_val for p in self.pivots]


def column_floor(col: dict, wt, stride: int) -> float:
    """Level below which the column is fully known."""
    floor = math.inf
    for r, srs in col.items():
        if srs.prec != math.inf:
            floor = min(floor, stride * srs.prec + wt(r))
    return floor


def column_wval(col: dict, wt, stride: int):
    """(weighted valuation, row, sigma val) of the best certified term.

    Returns (None, None, None) when no term is stored below precision;
    the true valuation is then >= column_floor.
    """
    best = None
    for r, srs in col.items():
        v = srs.valuation()
        if v is None:
            continue
        wv = stride * v + wt(r)
        if best is None or wv < best[0]:
            best = (wv, r, v)
    return best if best is not None else (None, None, None)


def _col_sub_scaled(col, other, f):
    """col - f * other, where f is a series in sigma."""
    out = dict(col)
    for r, srs in other.items():
        delta = f * srs
        out[r] = out[r] - delta if r in out else -delta
    return {r: s for r, s in out.items() if s.coeffs or s.prec != math.inf}


def weighted_echelon(field, columns, wt, stride, work_prec=64) -> EchelonResult:
    """Column echelon over F[[sigma]] with global-min weighted pivoting.

    Clears the pivot row in the remaining active columns at each step.
    Exactness survives monomial pivot entries; otherwise the cleared
    columns carry honest finite precision, with work_prec bounding the
    inverse expansion when both operands are exact.  Raises
    PrecisionExhausted if the minimal pivot is not certified, i.e. some
    unknown tail could hide a smaller weighted valuation.
    """
    cols = {i: dict(c) for i, c in enumerate(columns)}
    pivots, ech_cols = [], []
    taken_rows = set()
    while cols:
        best = None
        floor = math.inf
        for i in sorted(cols):
            wv, r, v = column_wval(cols[i], wt, stride)
            floor = min(floor, column_floor(cols[i], wt, stride))
            if wv is None:
                continue
            if best is None or wv < best[0]:
                best = (wv, i, r, v)
        if best is None:
            zero = sorted(cols)
            return EchelonResult(field, stride, wt, pivots, ech_cols,
                                 zero, floor)
        wv, ci, row, sval = best
        if wv >= floor:
            raise PrecisionExhausted(
                f"pivot at level {wv} not certified below floor {floor}")
        piv = cols.pop(ci)
        entry = piv[row]
        if row in taken_rows:
            raise AssertionError("pivot row reused; clearing failed")
        taken_rows.add(row)
        unit = entry.shift(-sval)
        monomial_unit = unit.prec == math.inf and len(unit.coeffs) == 1
        for j in list(cols):
            other = cols[j]
            tgt = other.get(row)
            if tgt is None or (not tgt.coeffs and tgt.prec == math.inf):
                continue
            tv = tgt.valuation_lb()
            if tv < sval:
                raise AssertionError("pivot not globally minimal")
            if monomial_unit:
                f = tgt.shift(-sval).scale(field.one() / unit.coeffs[0])
            else:
                if tgt.prec != math.inf:
                    need = max(int(tgt.prec) - sval, 1)
                elif unit.prec != math.inf:
                    need = max(int(unit.prec), 1)
                else:
                    need = max(work_prec, 1)
                f = tgt.shift(-sval) * unit_inverse(unit, need)
            cols[j] = _col_sub_scaled(other, piv, f)
        pivots.append(Pivot(ci, row, sval, wv))
        ech_cols.append(piv)
    return EchelonResult(field, stride, wt, pivots, ech_cols, [], math.inf)


class ModuleView:
    """An echelonized F[[sigma]]-module, ready for level-greedy solves."""

    def __init__(self, ech: EchelonResult, allow_zero_cols: bool = True):
        self.ech = ech
        self.field = ech.field
        self.stride = ech.stride
        self.wt = ech.wt
        # a column that vanished only to finite precision caps what the
        # module is known to span; verdicts at or past this level lie
        self.knowledge_floor = ech.zero_floor if ech.zero_cols else math.inf
        if not allow_zero_cols and ech.zero_cols:
            if ech.zero_floor == math.inf:
                raise ArithmeticError(
                    f"columns {ech.zero_cols} are exactly dependent "
                    f"on the others")
            raise PrecisionExhausted(
                f"columns {ech.zero_cols} vanish to precision floor "
                f"{ech.zero_floor}; cannot certify the module")

    def _candidates(self, level, shift_cap):
        cand = []
        for idx, (piv, col) in enumerate(zip(self.ech.pivots,
                                             self.ech.columns)):
            d = level - piv.weighted_val
            if d < 0 or d % self.stride:
                continue
            s = d // self.stride
            if shift_cap is not None and s > shift_cap:
                continue
            cand.append((idx, s, col))
        return cand

    def reduce_target(self, target: dict, shift_cap=None, level_cap=None,
                      collect=None):
        """Greedy level reduction of target modulo the module.

        Returns (level, residual): level is the first certified
        unsolvable level, or None when the residual was reduced as far
        as its precision floor (or past level_cap) without a certified
        failure.  collect, if a dict, accumulates the combination used
        as {pivot index: {shift: coefficient}}.
        """
        residual = dict(target)
        while True:
            wv, row, sval = column_wval(residual, self.wt, self.stride)
            floor = column_floor(residual, self.wt, self.stride)
            if wv is None or wv >= floor:
                return None, residual
            if level_cap is not None and wv > level_cap:
                return None, residual
            level = wv
            if level >= self.knowledge_floor:
                raise PrecisionExhausted(
                    f"level {level} reaches columns only known below "
                    f"{self.knowledge_floor}")
            cand = self._candidates(level, shift_cap)
            if not cand:
                return level, residual
            rows = set(residual)
            for _, _, c in cand:
                rows.update(c)
            rows = sorted(
                (r for r in rows
                 if self.wt(r) % self.stride == level % self.stride
                 and level >= self.wt(r)),
                key=repr)
            zero = self.field.zero()
            mat_rows, rhs = [], []
            for r in rows:
                k0 = (level - self.wt(r)) // self.stride
                row_vec = []
                for _, s, c in cand:
                    srs = c.get(r)
                    if srs is None:
                        row_vec.append(zero)
                        continue
                    k = k0 - s
                    if k < 0:
                        row_vec.append(zero)
                    elif k >= srs.prec:
                        raise PrecisionExhausted(
                            f"candidate slice at level {level} is beyond "
                            f"precision at row {r}")
                    else:
                        row_vec.append(srs.coeffs.get(k, zero))
                mat_rows.append(row_vec)
                tsrs = residual.get(r)
                if tsrs is None:
                    rhs.append(zero)
                elif k0 >= tsrs.prec:
                    raise PrecisionExhausted(
                        f"target slice at level {level} is beyond precision "
                        f"at row {r}")
                else:
                    rhs.append(tsrs.coeffs.get(k0, zero))
            sol = LinearSolver(self.field, mat_rows).solve(rhs)
            if sol is None:
                return level, residual
            for (idx, s, c), lam in zip(cand, sol):
                if lam.is_zero():
                    continue
                f = TruncatedSeries.monomial(self.field, s, lam)
                residual = _col_sub_scaled(residual, c, f)
                if collect is not None:
                    bucket = collect.setdefault(idx, {})
                    bucket[s] = bucket[s] + lam if s in bucket else lam

    def distance(self, target: dict, shift_cap=None, level_cap=None):
        """Max weighted valuation of target - m over module elements m.

        Returns a certified integer level, math.inf when the target is
        exactly in the module, or None when level_cap was given and no
        failure is possible at or below it.  Raises PrecisionExhausted
        when the answer is not determined by the known coefficients.
        """
        level, residual = self.reduce_target(target, shift_cap, level_cap)
        if level is not None:
            return level
        wv, _, _ = column_wval(residual, self.wt, self.stride)
        floor = column_floor(residual, self.wt, self.stride)
        if wv is None and floor == math.inf:
            # exact membership in the pivot span; unseen column tails
            # could only enlarge the module, never change this verdict
            return math.inf
        boundary = floor if (wv is None or wv >= floor) else wv
        boundary = min(boundary, self.knowledge_floor)
        if level_cap is not None and boundary > level_cap:
            return None
        raise PrecisionExhausted(
            f"reduction reached level {boundary} without a verdict")

    def express(self, target: dict):
        """Coefficients a_i in F[[sigma]] with target = sum a_i column_i.

        Raises ArithmeticError when the target is certified outside the
        module.  Coefficient precision follows the residual floor.
        """
        collect: dict = {}
        level, residual = self.reduce_target(target, collect=collect)
        if level is not None:
            raise ArithmeticError(
                f"target leaves the module at level {level}")
        floor = column_floor(residual, self.wt, self.stride)
        out = {}
        for idx, terms in collect.items():
            piv = self.ech.pivots[idx]
            if floor == math.inf:
                prec = math.inf
            else:
                prec = max(
                    (int(floor) - 1 - piv.weighted_val) // self.stride + 1, 0)
            out[idx] = TruncatedSeries(self.field, terms, prec)
        return out


def decompose_column(vec: dict, dec_fn, stride: int, field) -> dict:
    """Semilinear transform of an S-series vector into engine rows.

    vec maps outer keys to TruncatedSeries in S whose coefficients dec_fn
    splits as {subkey: root representative in the engine field}.  The
    S-exponent m = stride*k + j lands at row (outer, subkey, j), sigma
    power k.  Use row_weight as the weight function on the result.

    Source precision is carried over: every (outer, j) residue class
    with a finite bound keeps at least one entry recording it, so
    precision floors stay honest.
    """
    rowdata: dict = {}
    rowprec: dict = {}
    for outer, srs in vec.items():
        for m, c in srs.coeffs.items():
            k, j = divmod(m, stride)
            for sub, w in dec_fn(c).items():
                rowdata.setdefault((outer, sub, j), {})[k] = w
        if srs.prec != math.inf:
            for j in range(stride):
                kprec = max((int(srs.prec) - j + stride - 1) // stride, 0)
                key = (outer, j)
                rowprec[key] = min(rowprec.get(key, math.inf), kprec)
    col = {}
    covered = set()
    for (outer, sub, j), coeffs in rowdata.items():
        prec = rowprec.get((outer, j), math.inf)
        col[(outer, sub, j)] = TruncatedSeries(field, coeffs, prec)
        covered.add((outer, j))
    for (outer, j), prec in rowprec.items():
        if (outer, j) not in covered:
            col[(outer, None, j)] = TruncatedSeries(field, {}, prec)
    return col


def row_weight(key) -> int:
    """Weight of a decompose_column row key: its stored S-residue."""
    return key[2]


def run_certified(fn, config: PrecisionConfig = PrecisionConfig()):
    """Retry fn(prec) at doubled precision until it returns.

    fn must compute with honest precision bounds, raising
    PrecisionExhausted when prec is insufficient; any value it returns
    is certified, so the first success wins.
    """
    prec = config.start
    while True:
        try:
            return fn(prec)
        except PrecisionExhausted:
            if prec >= config.cap:
                raise
            prec = min(prec * 2, config.cap)
