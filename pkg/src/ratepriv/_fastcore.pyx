# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: batched filter objectives and basis solving.

Signatures mirror ratepriv._numpycore exactly; see the backend selector.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport log, INFINITY

cnp.import_array()

cdef double _LN2 = log(2.0)


cdef inline double _xlogx(double v) nogil:
    if v > 0.0:
        return v * log(v)
    return 0.0


def batch_filter_objectives(pxy_in, filters_in):
    """Utility I(Y;Z) and leakage I(X;Z) in bits for a batch of filters Y->Z."""
    cdef const double[:, ::1] pxy = np.ascontiguousarray(pxy_in, dtype=np.float64)
    cdef const double[:, :, ::1] filters = np.ascontiguousarray(filters_in, dtype=np.float64)
    cdef Py_ssize_t nx = pxy.shape[0]
    cdef Py_ssize_t ny = pxy.shape[1]
    cdef Py_ssize_t nb = filters.shape[0]
    cdef Py_ssize_t nz = filters.shape[2]
    if filters.shape[1] != ny:
        raise ValueError("filter batch does not match |Y|")

    cdef cnp.ndarray[cnp.float64_t, ndim=1] utility = np.empty(nb)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] leakage = np.empty(nb)
    cdef double[::1] uview = utility
    cdef double[::1] lview = leakage

    cdef cnp.ndarray[cnp.float64_t, ndim=1] px_arr = np.asarray(pxy).sum(axis=1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] py_arr = np.asarray(pxy).sum(axis=0)
    cdef double[::1] px = px_arr
    cdef double[::1] py = py_arr

    cdef double hx = 0.0, hy = 0.0
    cdef Py_ssize_t x, y, z, b
    for x in range(nx):
        hx -= _xlogx(px[x])
    for y in range(ny):
        hy -= _xlogx(py[y])

    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.zeros(nz)
    cdef double[::1] pz = buf
    cdef double hz, hyz, hxz, p, acc
    with nogil:
        for b in range(nb):
            hz = 0.0
            hyz = 0.0
            hxz = 0.0
            for z in range(nz):
                acc = 0.0
                for y in range(ny):
                    p = py[y] * filters[b, y, z]
                    acc += p
                    hyz -= _xlogx(p)
                hz -= _xlogx(acc)
                for x in range(nx):
                    acc = 0.0
                    for y in range(ny):
                        acc += pxy[x, y] * filters[b, y, z]
                    hxz -= _xlogx(acc)
            uview[b] = (hy + hz - hyz) / _LN2
            lview[b] = (hx + hz - hxz) / _LN2
            if uview[b] < 0.0:
                uview[b] = 0.0
            if lview[b] < 0.0:
                lview[b] = 0.0
    return utility, leakage


def solve_bases(a, b, combos, chunk=4096):
    """LU-solve the square systems a[:, combo] @ x = b for candidate bases."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_arr = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] c_arr = np.ascontiguousarray(combos, dtype=np.int64)
    cdef Py_ssize_t r = a_arr.shape[0]
    cdef Py_ssize_t nc = c_arr.shape[0]
    if c_arr.shape[1] != r and nc > 0:
        raise ValueError("combo width must equal the row count of a")

    cdef cnp.ndarray[cnp.float64_t, ndim=2] sols = np.zeros((nc, r))
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.zeros(nc, dtype=np.uint8)
    if r == 0 or nc == 0:
        return sols, ok.astype(bool)

    cdef double[:, ::1] av = a_arr
    cdef double[::1] bv = b_arr
    cdef cnp.int64_t[:, ::1] cv = c_arr
    cdef double[:, ::1] sv = sols
    cdef cnp.uint8_t[::1] okv = ok

    cdef cnp.ndarray[cnp.float64_t, ndim=2] m_buf = np.empty((r, r))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rhs_buf = np.empty(r)
    cdef double[:, ::1] m = m_buf
    cdef double[::1] rhs = rhs_buf
    cdef Py_ssize_t ci, i, jcol, k, piv
    cdef double amax, pmax, tmp, factor

    with nogil:
        for ci in range(nc):
            amax = 0.0
            for jcol in range(r):
                k = cv[ci, jcol]
                for i in range(r):
                    tmp = av[i, k]
                    m[i, jcol] = tmp
                    if tmp < 0.0:
                        tmp = -tmp
                    if tmp > amax:
                        amax = tmp
                rhs[jcol] = bv[jcol]
            if amax == 0.0:
                continue
            # LU with partial pivoting, in place
            okv[ci] = 1
            for k in range(r):
                piv = k
                pmax = m[k, k] if m[k, k] >= 0.0 else -m[k, k]
                for i in range(k + 1, r):
                    tmp = m[i, k] if m[i, k] >= 0.0 else -m[i, k]
                    if tmp > pmax:
                        pmax = tmp
                        piv = i
                if pmax <= 1e-12 * amax:
                    okv[ci] = 0
                    break
                if piv != k:
                    for jcol in range(r):
                        tmp = m[k, jcol]
                        m[k, jcol] = m[piv, jcol]
                        m[piv, jcol] = tmp
                    tmp = rhs[k]
                    rhs[k] = rhs[piv]
                    rhs[piv] = tmp
                for i in range(k + 1, r):
                    factor = m[i, k] / m[k, k]
                    if factor != 0.0:
                        for jcol in range(k + 1, r):
                            m[i, jcol] -= factor * m[k, jcol]
                        rhs[i] -= factor * rhs[k]
                    m[i, k] = 0.0
            if okv[ci] == 0:
                continue
            for k in range(r - 1, -1, -1):
                tmp = rhs[k]
                for jcol in range(k + 1, r):
                    tmp -= m[k, jcol] * sv[ci, jcol]
                sv[ci, k] = tmp / m[k, k]
    return sols, ok.astype(bool)
