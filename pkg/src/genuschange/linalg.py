"""Exact dense linear algebra over a wrapped coefficient field.

Entries are field elements with +, -, *, / and is_zero(); the field
object supplies zero() and one().  Everything is plain Gaussian
elimination; matrices here stay small (a few hundred rows at most).
"""

from __future__ import annotations


class LinearSolver:
    """Row echelon form of a matrix, reusable for many right hand sides."""

    def __init__(self, field, rows):
        self.field = field
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        # work on an augmented-free copy; record the row operations
        self.mat = [list(r) for r in rows]
        self.ops = []   # (kind, ...) replayed onto each rhs
        self.pivots = []  # (row, col)
        self._echelonize()

    def _echelonize(self):
        mat, ops = self.mat, self.ops
        row = 0
        for col in range(self.ncols):
            pivot = None
            for r in range(row, self.nrows):
                if not mat[r][col].is_zero():
                    pivot = r
                    break
            if pivot is None:
                continue
            if pivot != row:
                mat[row], mat[pivot] = mat[pivot], mat[row]
                ops.append(("swap", row, pivot))
            inv = self.field.one() / mat[row][col]
            mat[row] = [x * inv for x in mat[row]]
            ops.append(("scale", row, inv))
            for r in range(self.nrows):
                if r == row:
                    continue
                f = mat[r][col]
                if f.is_zero():
                    continue
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
                ops.append(("axpy", r, row, f))
            self.pivots.append((row, col))
            row += 1
            if row == self.nrows:
                break

    @property
    def rank(self):
        return len(self.pivots)

    def solve(self, rhs):
        """One solution of A x = rhs, or None if inconsistent."""
        b = list(rhs)
        for op in self.ops:
            if op[0] == "swap":
                _, i, j = op
                b[i], b[j] = b[j], b[i]
            elif op[0] == "scale":
                _, i, f = op
                b[i] = b[i] * f
            else:
                _, i, j, f = op
                b[i] = b[i] - f * b[j]
        piv_rows = {r for r, _ in self.pivots}
        for r in range(self.nrows):
            if r not in piv_rows and not b[r].is_zero():
                return None
        x = [self.field.zero()] * self.ncols
        for r, c in self.pivots:
            x[c] = b[r]
        return x


def solve_linear(field, rows, rhs):
    """Solve A x = rhs once; returns a solution or None."""
    return LinearSolver(field, rows).solve(rhs)


def kernel_basis(field, rows):
    """Basis of the right kernel of A."""
    slv = LinearSolver(field, rows)
    pivot_cols = {c for _, c in slv.pivots}
    basis = []
    for free in range(slv.ncols):
        if free in pivot_cols:
            continue
        v = [field.zero()] * slv.ncols
        v[free] = field.one()
        for r, c in slv.pivots:
            v[c] = -slv.mat[r][free]
        basis.append(v)
    return basis


def matrix_rank(field, rows):
    return LinearSolver(field, rows).rank
