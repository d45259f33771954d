"""Small exact linear algebra over a FieldSpec (raw values).

Matrices are lists of lists of raw coefficients (int residues or
Fractions).  Everything here is dense Gaussian elimination; the
dimensions in this project stay in the dozens.
"""

from __future__ import annotations

from typing import List, Optional

from .fields import FieldSpec, Raw

Matrix = List[List[Raw]]


def rref(rows: Matrix, field: FieldSpec):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv_raw(m[r][c])
        m[r] = [field.mul_raw(inv, v) for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub_raw(a, field.mul_raw(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Matrix, field: FieldSpec) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows, field)
    return len(pivots)


def left_nullspace_vector(rows: Matrix, field: FieldSpec) -> Optional[List[Raw]]:
    """First nonzero c with sum_i c_i * rows_i = 0, or None if independent."""
    n = len(rows)
    if n == 0:
        return None
    ncols = len(rows[0])
    aug = [list(rows[i]) + [field.one_raw if j == i else field.zero_raw for j in range(n)] for i in range(n)]
    red, _ = rref(aug, field)
    for row in red:
        if not any(row[:ncols]) and any(row[ncols:]):
            return row[ncols:]
    return None


def left_nullspace(rows: Matrix, field: FieldSpec) -> List[List[Raw]]:
    """All relations c with sum_i c_i * rows_i = 0, as an echelon basis."""
    n = len(rows)
    if n == 0:
        return []
    ncols = len(rows[0])
    aug = [list(rows[i]) + [field.one_raw if j == i else field.zero_raw for j in range(n)] for i in range(n)]
    red, _ = rref(aug, field)
    return [row[ncols:] for row in red if not any(row[:ncols]) and any(row[ncols:])]


def solve(rows: Matrix, rhs: List[Raw], field: FieldSpec) -> Optional[List[Raw]]:
    """One solution x of rows^T... no: solves sum_j x_j * rows[j] = rhs."""
    n = len(rows)
    if n == 0:
        return None if any(rhs) else []
    ncols = len(rows[0])
    # columns are the unknown coefficients: build the ncols x n system
    aug = [[rows[j][i] for j in range(n)] + [rhs[i]] for i in range(ncols)]
    red, pivots = rref(aug, field)
    x = [field.zero_raw] * n
    for r, c in enumerate(pivots):
        if c == n:
            return None  # inconsistent
        x[c] = red[r][n]
    # verify (guards against underdetermined numeric slips)
    for i in range(ncols):
        acc = field.zero_raw
        for j in range(n):
            acc = field.add_raw(acc, field.mul_raw(x[j], rows[j][i]))
        if acc != rhs[i]:
            return None
    return x


def det(rows: Matrix, field: FieldSpec) -> Raw:
    m = [list(r) for r in rows]
    n = len(m)
    sign = field.one_raw
    acc = field.one_raw
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return field.zero_raw
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = field.neg_raw(sign)
        acc = field.mul_raw(acc, m[c][c])
        inv = field.inv_raw(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = field.mul_raw(inv, m[i][c])
                m[i] = [field.sub_raw(a, field.mul_raw(f, b)) for a, b in zip(m[i], m[c])]
    return field.mul_raw(sign, acc)


def invert(rows: Matrix, field: FieldSpec) -> Optional[Matrix]:
    n = len(rows)
    aug = [list(rows[i]) + [field.one_raw if j == i else field.zero_raw for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, field)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def mat_mul(a: Matrix, b: Matrix, field: FieldSpec) -> Matrix:
    n, k = len(a), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = field.zero_raw
            for t in range(len(b)):
                acc = field.add_raw(acc, field.mul_raw(a[i][t], b[t][j]))
            row.append(acc)
        out.append(row)
    return out
