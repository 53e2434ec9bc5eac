# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled tableau kernels; same contract as ``_kernels_py``."""


def pivot(list T, Py_ssize_t r, Py_ssize_t c, object D):
    cdef list prow = <list>T[r]
    cdef object p = prow[c]
    cdef Py_ssize_t width = len(prow)
    cdef Py_ssize_t nrows = len(T)
    cdef Py_ssize_t i, j
    cdef list row
    cdef object f, v
    cdef bint rescale = p != D
    for i in range(nrows):
        if i == r:
            continue
        row = <list>T[i]
        f = row[c]
        if f == 0:
            if rescale:
                for j in range(width):
                    v = row[j]
                    if v:
                        row[j] = v * p // D
        else:
            for j in range(width):
                row[j] = (row[j] * p - f * prow[j]) // D
    if p < 0:
        for i in range(nrows):
            row = <list>T[i]
            for j in range(width):
                row[j] = -row[j]
        p = -p
    return p


def entering(list obj, Py_ssize_t limit):
    cdef Py_ssize_t j
    for j in range(limit):
        if obj[j] < 0:
            return j
    return -1


def leaving(list T, Py_ssize_t c, Py_ssize_t nrows, Py_ssize_t rhs, list basis):
    cdef Py_ssize_t best = -1
    cdef Py_ssize_t i
    cdef object a, b, bnum = 0, bden = 1, lhs, cur
    cdef list row
    for i in range(nrows):
        row = <list>T[i]
        a = row[c]
        if a > 0:
            b = row[rhs]
            if best < 0:
                best = i
                bnum = b
                bden = a
                continue
            lhs = b * bden
            cur = bnum * a
            if lhs < cur or (lhs == cur and basis[i] < basis[best]):
                best = i
                bnum = b
                bden = a
    return best
