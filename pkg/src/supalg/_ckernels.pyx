# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-row kernels; same contracts as ``_pykernels``.

Rows are packed into 64-bit words, so carriers are limited to 64 points.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXN = 64
    MAXARITY = 16


cdef inline int _lowbit(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


def compose_rows(list r, list s):
    cdef Py_ssize_t n = len(r)
    cdef Py_ssize_t i
    cdef uint64_t row, acc
    cdef uint64_t sv[MAXN]
    if n > MAXN or len(s) > MAXN:
        raise ValueError("compiled kernels support at most 64 points")
    for i in range(len(s)):
        sv[i] = <uint64_t>s[i]
    out = [0] * n
    for i in range(n):
        row = <uint64_t>r[i]
        acc = 0
        while row:
            acc |= sv[_lowbit(row)]
            row &= row - 1
        out[i] = acc
    return out


def transitive_closure_rows(list r):
    cdef Py_ssize_t n = len(r)
    cdef Py_ssize_t i, k
    cdef uint64_t rv[MAXN]
    cdef uint64_t bit, rk
    if n > MAXN:
        raise ValueError("compiled kernels support at most 64 points")
    for i in range(n):
        rv[i] = <uint64_t>r[i]
    for k in range(n):
        bit = (<uint64_t>1) << k
        rk = rv[k]
        for i in range(n):
            if rv[i] & bit:
                rv[i] |= rk
    return [rv[i] for i in range(n)]


def apply_op_rows(table, Py_ssize_t n, Py_ssize_t arity, list args):
    cdef const int64_t[::1] tab
    cdef uint64_t out[MAXN]
    cdef Py_ssize_t i, j, total, k
    cdef int *px[MAXARITY]
    cdef int *py[MAXARITY]
    cdef Py_ssize_t cnt[MAXARITY]
    cdef Py_ssize_t pos[MAXARITY]
    cdef int64_t accx[MAXARITY + 1]
    cdef int64_t accy[MAXARITY + 1]
    cdef uint64_t row
    cdef int64_t u, v
    cdef int level
    if n > MAXN:
        raise ValueError("compiled kernels support at most 64 points")
    if arity > MAXARITY:
        raise ValueError("compiled kernels support arity at most 16")
    import numpy as np
    tab = np.ascontiguousarray(table, dtype=np.int64)
    for i in range(n):
        out[i] = 0
    if arity == 0:
        if n:
            u = tab[0]
            out[u] = (<uint64_t>1) << u
        return [out[i] for i in range(n)]
    for j in range(arity):
        px[j] = NULL
        py[j] = NULL
    try:
        for j in range(arity):
            rows = args[j]
            total = 0
            for i in range(n):
                row = <uint64_t>rows[i]
                while row:
                    total += 1
                    row &= row - 1
            cnt[j] = total
            if total == 0:
                return [0] * n
            px[j] = <int *>malloc(total * sizeof(int))
            py[j] = <int *>malloc(total * sizeof(int))
            if px[j] == NULL or py[j] == NULL:
                raise MemoryError()
            k = 0
            for i in range(n):
                row = <uint64_t>rows[i]
                while row:
                    px[j][k] = <int>i
                    py[j][k] = _lowbit(row)
                    k += 1
                    row &= row - 1
        with nogil:
            # Odometer over the product of pair lists, keeping prefix indices.
            accx[0] = 0
            accy[0] = 0
            for j in range(arity):
                pos[j] = 0
                accx[j + 1] = accx[j] * n + px[j][0]
                accy[j + 1] = accy[j] * n + py[j][0]
            while True:
                u = tab[accx[arity]]
                v = tab[accy[arity]]
                out[u] |= (<uint64_t>1) << v
                level = <int>arity - 1
                while level >= 0:
                    pos[level] += 1
                    if pos[level] < cnt[level]:
                        break
                    pos[level] = 0
                    level -= 1
                if level < 0:
                    break
                for j in range(level, arity):
                    accx[j + 1] = accx[j] * n + px[j][pos[j]]
                    accy[j + 1] = accy[j] * n + py[j][pos[j]]
    finally:
        for j in range(arity):
            if px[j] != NULL:
                free(px[j])
            if py[j] != NULL:
                free(py[j])
    return [out[i] for i in range(n)]
