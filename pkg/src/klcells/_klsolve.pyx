# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled column solver for KL polynomials.

Same contract and data layout as ``_klsolve_py.solve_column``; accumulators
are dense int64 rows with overflow-checked arithmetic.
"""

from libc.stdlib cimport calloc, free, malloc
from libc.stdint cimport int64_t

from ._klsolve_py import AntisymmetryError


cdef extern from *:
    """
    static inline int kl_mul_add(long long *acc, long long a, long long b) {
        long long p;
        if (__builtin_mul_overflow(a, b, &p)) return 1;
        if (__builtin_add_overflow(*acc, p, acc)) return 1;
        return 0;
    }
    """
    int kl_mul_add(long long *acc, long long a, long long b) nogil


def solve_column(long long w, const int64_t[::1] interval, const int64_t[::1] col_ptr,
                 const int64_t[::1] ent_x, const int64_t[::1] ent_ptr,
                 const int64_t[::1] t_exp, const int64_t[::1] t_coef,
                 long long span, int64_t[::1] slot_of):
    """Return [(x, {exp: coeff}), ...] for the nonzero P_{x,w}, x < w.

    ``span`` bounds |exponent| of every P and r involved (L(w) suffices);
    ``slot_of`` is scratch of table size, left in an unspecified state.
    """
    cdef Py_ssize_t n = interval.shape[0]
    cdef Py_ssize_t width = 3 * span + 1
    cdef long long off = span
    cdef long long *acc = <long long *> calloc(n * width, sizeof(long long))
    cdef long long *lo = <long long *> malloc(n * sizeof(long long))
    cdef long long *hi = <long long *> malloc(n * sizeof(long long))
    cdef long long *pe = <long long *> malloc((span + 2) * sizeof(long long))
    cdef long long *pc = <long long *> malloc((span + 2) * sizeof(long long))
    if acc == NULL or lo == NULL or hi == NULL or pe == NULL or pc == NULL:
        free(acc); free(lo); free(hi); free(pe); free(pc)
        raise MemoryError()
    cdef Py_ssize_t i, k, j, q, row, npb
    cdef long long y, x, e, e2, c2, c, lo_i, hi_i
    cdef long long *a
    cdef long long *s
    cdef int bad = 0
    out = []
    try:
        for i in range(n):
            slot_of[interval[i]] = i
            lo[i] = width
            hi[i] = -1
        for i in range(n - 1, -1, -1):
            y = interval[i]
            if y == w:
                pe[0] = 0
                pc[0] = 1
                npb = 1
            else:
                s = acc + i * width
                lo_i = lo[i]
                hi_i = hi[i]
                if lo_i > hi_i:
                    continue
                if s[off] != 0:
                    raise AntisymmetryError(f"constant term in S at slot {y} of column {w}")
                npb = 0
                for q in range(lo_i, hi_i + 1):
                    e = q - off
                    c = s[q]
                    if c == 0:
                        continue
                    if -e + off < 0 or -e + off >= width or s[-e + off] != -c:
                        raise AntisymmetryError(f"S not antisymmetric at slot {y} of column {w}")
                    if e < 0:
                        if npb > span:
                            raise AntisymmetryError("exponent span exceeded")
                        pe[npb] = -e   # store bar(P) directly
                        pc[npb] = c
                        npb += 1
                if npb == 0:
                    continue
                out.append((y, {-pe[q]: pc[q] for q in range(npb - 1, -1, -1)}))
            with nogil:
                for k in range(col_ptr[y], col_ptr[y + 1]):
                    x = ent_x[k]
                    if x == y:
                        continue
                    row = slot_of[x]
                    a = acc + row * width
                    for j in range(ent_ptr[k], ent_ptr[k + 1]):
                        e2 = t_exp[j] + off
                        c2 = t_coef[j]
                        for q in range(npb):
                            e = pe[q] + e2
                            if e < 0 or e >= width:
                                bad = 2
                                break
                            if kl_mul_add(&a[e], pc[q], c2):
                                bad = 1
                                break
                            if e < lo[row]:
                                lo[row] = e
                            if e > hi[row]:
                                hi[row] = e
                        if bad:
                            break
                    if bad:
                        break
            if bad == 1:
                raise OverflowError("int64 overflow in KL accumulation")
            if bad == 2:
                raise ValueError("exponent outside the declared span")
    finally:
        free(acc); free(lo); free(hi); free(pe); free(pc)
    out.reverse()
    return out
