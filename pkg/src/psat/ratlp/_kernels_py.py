"""Pure-Python tableau kernels (reference implementation and fallback).

The tableau is a list of rows of Python ints.  Every entry equals the true
rational value times the current basis determinant ``D`` (fraction-free
integer pivoting), so a pivot needs only exact integer division.
"""


def pivot(T, r, c, D):
    """Pivot on ``T[r][c]`` in place and return the new determinant.

    The returned determinant is always positive; when the pivot element is
    negative the whole tableau is negated to keep it so.
    """
    prow = T[r]
    p = prow[c]
    width = len(prow)
    for i in range(len(T)):
        if i == r:
            continue
        row = T[i]
        f = row[c]
        if f == 0:
            if p != D:
                for j in range(width):
                    v = row[j]
                    if v:
                        row[j] = v * p // D
        else:
            for j in range(width):
                row[j] = (row[j] * p - f * prow[j]) // D
    if p < 0:
        for row in T:
            for j in range(width):
                row[j] = -row[j]
        p = -p
    return p


def entering(obj, limit):
    """Bland's rule: lowest column index below ``limit`` with negative cost."""
    for j in range(limit):
        if obj[j] < 0:
            return j
    return -1


def leaving(T, c, nrows, rhs, basis):
    """Minimum-ratio row for column ``c``; ties go to the lowest basic index."""
    best = -1
    bnum = 0
    bden = 1
    for i in range(nrows):
        a = T[i][c]
        if a > 0:
            b = T[i][rhs]
            if best < 0:
                best, bnum, bden = i, b, a
                continue
            lhs = b * bden
            cur = bnum * a
            if lhs < cur or (lhs == cur and basis[i] < basis[best]):
                best, bnum, bden = i, b, a
    return best
