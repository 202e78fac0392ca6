# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense elimination over GF(2^k): the hot loops of the field tier."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint16_t, uint64_t

cnp.import_array()


cdef inline uint16_t _mul(uint16_t a, uint16_t b, const uint16_t[::1] exp, const uint16_t[::1] log) nogil:
    if a == 0 or b == 0:
        return 0
    return exp[<int>log[a] + <int>log[b]]


def rref_inplace(uint16_t[:, ::1] a, const uint16_t[::1] exp, const uint16_t[::1] log, int order):
    """Reduce ``a`` to reduced row echelon form in place; return pivot columns."""
    cdef Py_ssize_t nr = a.shape[0], nc = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef uint16_t piv, inv, f
    cdef int n = order - 1
    pivots = []
    with nogil:
        c = 0
        while c < nc and r < nr:
            p = -1
            for i in range(r, nr):
                if a[i, c] != 0:
                    p = i
                    break
            if p < 0:
                c += 1
                continue
            if p != r:
                for j in range(c, nc):
                    a[p, j], a[r, j] = a[r, j], a[p, j]
            piv = a[r, c]
            if piv != 1:
                inv = exp[(n - <int>log[piv]) % n]
                for j in range(c, nc):
                    a[r, j] = _mul(a[r, j], inv, exp, log)
            for i in range(nr):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                for j in range(c, nc):
                    if a[r, j] != 0:
                        a[i, j] ^= _mul(a[r, j], f, exp, log)
            with gil:
                pivots.append(c)
            r += 1
            c += 1
    return pivots


def rank_gf2_packed(uint64_t[:, ::1] rows, Py_ssize_t ncols):
    """Rank over GF(2) of a bit-packed matrix (bit j of word j//64 is column j); destroys input."""
    cdef Py_ssize_t nr = rows.shape[0], nw = rows.shape[1]
    cdef Py_ssize_t r = 0, c, i, p, w, word
    cdef uint64_t bit
    with nogil:
        for c in range(ncols):
            if r >= nr:
                break
            word = c >> 6
            bit = (<uint64_t>1) << (c & 63)
            p = -1
            for i in range(r, nr):
                if rows[i, word] & bit:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for w in range(word, nw):
                    rows[p, w], rows[r, w] = rows[r, w], rows[p, w]
            for i in range(r + 1, nr):
                if rows[i, word] & bit:
                    for w in range(word, nw):
                        rows[i, w] ^= rows[r, w]
            r += 1
    return r


def matmul(const uint16_t[:, ::1] a, const uint16_t[:, ::1] b, const uint16_t[::1] exp, const uint16_t[::1] log):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], l = b.shape[1]
    cdef Py_ssize_t i, j, k
    out = np.zeros((n, l), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    cdef uint16_t x
    with nogil:
        for i in range(n):
            for k in range(m):
                x = a[i, k]
                if x == 0:
                    continue
                for j in range(l):
                    if b[k, j] != 0:
                        o[i, j] ^= _mul(x, b[k, j], exp, log)
    return out
