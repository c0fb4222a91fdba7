# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 integer diagonalization kernel.

Same contract as the pure-Python kernel.  Any intermediate value that does
not fit in 63 bits raises OverflowError, and the caller retries with Python
integers.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static inline int khtl_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int khtl_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int khtl_mul_ovf(long long a, long long b, long long *r) nogil
    int khtl_sub_ovf(long long a, long long b, long long *r) nogil


cdef inline long long _abs(long long v) nogil:
    return -v if v < 0 else v


cdef inline long long _floordiv(long long a, long long b) nogil:
    cdef long long q = a // b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef int _axpy_rows(long long *A, Py_ssize_t nc, Py_ssize_t dst, Py_ssize_t src,
                    Py_ssize_t start, long long k) nogil:
    """row dst -= k * row src over columns start..; return 1 on overflow."""
    cdef Py_ssize_t j
    cdef long long prod, res
    for j in range(start, nc):
        if A[src * nc + j] != 0:
            if khtl_mul_ovf(k, A[src * nc + j], &prod):
                return 1
            if khtl_sub_ovf(A[dst * nc + j], prod, &res):
                return 1
            A[dst * nc + j] = res
    return 0


cdef int _axpy_cols(long long *A, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t dst, Py_ssize_t src,
                    Py_ssize_t start, long long k) nogil:
    cdef Py_ssize_t i
    cdef long long prod, res
    for i in range(start, nr):
        if A[i * nc + src] != 0:
            if khtl_mul_ovf(k, A[i * nc + src], &prod):
                return 1
            if khtl_sub_ovf(A[i * nc + dst], prod, &res):
                return 1
            A[i * nc + dst] = res
    return 0


cdef void _swap_rows(long long *A, Py_ssize_t nc, Py_ssize_t a, Py_ssize_t b) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    if a == b:
        return
    for j in range(nc):
        tmp = A[a * nc + j]
        A[a * nc + j] = A[b * nc + j]
        A[b * nc + j] = tmp


cdef void _swap_cols(long long *A, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t a, Py_ssize_t b) nogil:
    cdef Py_ssize_t i
    cdef long long tmp
    if a == b:
        return
    for i in range(nr):
        tmp = A[i * nc + a]
        A[i * nc + a] = A[i * nc + b]
        A[i * nc + b] = tmp


def diagonalize(rows):
    """Diagonalize a dense integer matrix; see the pure-Python kernel for the contract."""
    cdef Py_ssize_t nr = len(rows)
    cdef Py_ssize_t nc = len(rows[0]) if nr else 0
    if nr == 0 or nc == 0:
        return []
    cdef long long *A = <long long *> malloc(nr * nc * sizeof(long long))
    if A == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, t, bi, bj
    cdef long long v, p, k, best
    cdef int clean, ovf = 0
    diag = []
    try:
        for i in range(nr):
            row = rows[i]
            for j in range(nc):
                A[i * nc + j] = row[j]  # raises OverflowError beyond int64
        t = 0
        while t < nr and t < nc:
            best = 0
            bi = -1
            bj = -1
            for i in range(t, nr):
                for j in range(t, nc):
                    v = _abs(A[i * nc + j])
                    if v != 0 and (best == 0 or v < best):
                        best = v
                        bi = i
                        bj = j
                        if best == 1:
                            break
                if best == 1:
                    break
            if best == 0:
                break
            _swap_rows(A, nc, t, bi)
            _swap_cols(A, nr, nc, t, bj)
            while True:
                p = A[t * nc + t]
                clean = 1
                for i in range(t + 1, nr):
                    v = A[i * nc + t]
                    if v != 0:
                        k = _floordiv(v, p)
                        if k != 0 and _axpy_rows(A, nc, i, t, t, k):
                            ovf = 1
                            break
                        if A[i * nc + t] != 0:
                            clean = 0
                if ovf:
                    break
                for j in range(t + 1, nc):
                    v = A[t * nc + j]
                    if v != 0:
                        k = _floordiv(v, p)
                        if k != 0 and _axpy_cols(A, nr, nc, j, t, t, k):
                            ovf = 1
                            break
                        if A[t * nc + j] != 0:
                            clean = 0
                if ovf or clean:
                    break
                best = _abs(p)
                bi = t
                bj = t
                for i in range(t + 1, nr):
                    v = _abs(A[i * nc + t])
                    if v != 0 and v < best:
                        best = v
                        bi = i
                        bj = t
                for j in range(t + 1, nc):
                    v = _abs(A[t * nc + j])
                    if v != 0 and v < best:
                        best = v
                        bi = t
                        bj = j
                _swap_rows(A, nc, t, bi)
                _swap_cols(A, nr, nc, t, bj)
            if ovf:
                raise OverflowError("int64 overflow in diagonalization")
            diag.append(_abs(A[t * nc + t]))
            t += 1
    finally:
        free(A)
    return diag
