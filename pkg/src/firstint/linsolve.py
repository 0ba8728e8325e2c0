"""Exact linear algebra over Q: fraction-free elimination with nullspace.

Rows are scaled to integers, forward elimination is Bareiss one-step
fraction-free, and back-substitution produces one particular solution plus
a basis of the homogeneous nullspace.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd

from .errors import Inconsistent


@dataclass
class LinearSystem:
    matrix: list          # list of rows, each a list of Fraction/int
    rhs: list             # list of Fraction/int

    def __post_init__(self):
        if len(self.matrix) != len(self.rhs):
            raise ValueError("matrix/rhs length mismatch")
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")


@dataclass
class LinearSolution:
    solution: list        # one particular solution (Fractions)
    nullspace: list       # basis vectors of the homogeneous solutions


def _int_rows(matrix, rhs):
    out = []
    for row, b in zip(matrix, rhs):
        fr = [Fraction(v) for v in row] + [Fraction(b)]
        den = 1
        for v in fr:
            den = den * v.denominator // _int_gcd(den, v.denominator)
        ints = [int(v * den) for v in fr]
        g = 0
        for v in ints:
            g = _int_gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def solve_linear(sys):
    """Solve A x = b exactly; raises Inconsistent when no solution exists."""
    rows = _int_rows(sys.matrix, sys.rhs)
    ncols = len(sys.matrix[0]) if sys.matrix else 0
    nrows = len(rows)
    pivots = []          # (row, col) in elimination order
    prev_pivot = 1
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for j in range(c, ncols + 1):
                ri[j] = (p * ri[j] - f * rows[r][j]) // prev_pivot
        prev_pivot = p
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols] != 0:
            raise Inconsistent("linear system has no solution")
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]

    def back_substitute(rhs_col, free_assign):
        sol = [Fraction(0)] * ncols
        for c, v in free_assign.items():
            sol[c] = Fraction(v)
        for (pr, pc) in reversed(pivots):
            acc = Fraction(rows[pr][ncols]) * rhs_col
            for c in range(pc + 1, ncols):
                if rows[pr][c]:
                    acc -= Fraction(rows[pr][c]) * sol[c]
            sol[pc] = acc / rows[pr][pc]
        return sol

    particular = back_substitute(1, {c: 0 for c in free_cols})
    nullspace = []
    for fc in free_cols:
        assign = {c: (1 if c == fc else 0) for c in free_cols}
        nullspace.append(back_substitute(0, assign))
    return LinearSolution(particular, nullspace)


def solve_field_linear(rows, rhs, field):
    """Gaussian elimination over a generic field (sparse dict rows).

    ``rows`` is a list of dicts {col: field elem}; ``rhs`` a list of field
    elems; ``field`` provides add/sub/mul/div/is_zero/zero/one.  Returns
    (solution dict col -> elem, free_cols list) or raises Inconsistent.
    Used by internal engines where coefficients live in a function field.
    """
    work = [(dict(r), b) for r, b in zip(rows, rhs)]
    cols = sorted({c for r, _ in work for c in r})
    assignments = {}
    pivots = []
    for c in cols:
        pr = None
        for i, (r, b) in enumerate(work):
            if c in r and not field.is_zero(r[c]) and i not in [p[0] for p in pivots]:
                pr = i
                break
        if pr is None:
            continue
        prow, pb = work[pr]
        pc = prow[c]
        for i, (r, b) in enumerate(work):
            if i == pr or c not in r or field.is_zero(r[c]):
                continue
            f = field.div(r[c], pc)
            for cc, v in prow.items():
                nv = field.sub(r.get(cc, field.zero()), field.mul(f, v))
                if field.is_zero(nv):
                    r.pop(cc, None)
                else:
                    r[cc] = nv
            work[i] = (r, field.sub(b, field.mul(f, pb)))
        pivots.append((pr, c))
    for i, (r, b) in enumerate(work):
        if i in [p[0] for p in pivots]:
            continue
        if all(field.is_zero(v) for v in r.values()) and not field.is_zero(b):
            raise Inconsistent("field linear system has no solution")
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in cols if c not in pivot_cols]
    for pr, c in reversed(pivots):
        r, b = work[pr]
        acc = b
        for cc, v in r.items():
            if cc == c:
                continue
            if cc in assignments:
                acc = field.sub(acc, field.mul(v, assignments[cc]))
            elif cc in free_cols:
                continue  # free variables fixed at zero
            else:
                raise AssertionError("unresolved column")
        assignments[c] = field.div(acc, r[c])
    return assignments, free_cols
