# cython: language_level=3
"""Compiled arithmetic kernels (integer polynomial convolution/reduction).

Coefficients are arbitrary-precision Python ints, so the win over the pure
version comes from loop and indexing overhead, not machine arithmetic.
Contract matches iwrank._kernels_pure exactly.
"""


def convolve(list a, list b):
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i, j
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    cdef object ai, bj
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        for j in range(lb):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def fold_tail(list vec, list red, Py_ssize_t deg):
    cdef Py_ssize_t k, t, lv = len(vec)
    cdef list out = list(vec[:deg])
    cdef list row
    cdef object c, rt
    while len(out) < deg:
        out.append(0)
    for k in range(deg, lv):
        c = vec[k]
        if not c:
            continue
        row = red[k - deg]
        for t in range(deg):
            rt = row[t]
            if rt:
                out[t] = out[t] + c * rt
    return out


def convolve_reduce(list a, list b, list red, Py_ssize_t deg):
    return fold_tail(convolve(a, b), red, deg)
