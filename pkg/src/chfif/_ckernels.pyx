# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract and operation order as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

NAME = "cython"


cdef inline Py_ssize_t _bisect_left(const double[::1] a, double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def chaos_game(nodes, alpha, beta, gamma, p0, pN, q0, qN, choices, Py_ssize_t burn_in,
               double x, double y, double z):
    cdef const double[::1] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] al = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef const double[::1] be = np.ascontiguousarray(beta, dtype=np.float64)
    cdef const double[::1] ga = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef const double[::1] pa = np.ascontiguousarray(p0, dtype=np.float64)
    cdef const double[::1] pb = np.ascontiguousarray(pN, dtype=np.float64)
    cdef const double[::1] qa = np.ascontiguousarray(q0, dtype=np.float64)
    cdef const double[::1] qb = np.ascontiguousarray(qN, dtype=np.float64)
    cdef const cnp.int64_t[::1] ch = np.ascontiguousarray(choices, dtype=np.int64)
    cdef Py_ssize_t total = ch.shape[0]
    cdef Py_ssize_t keep = total - burn_in if total > burn_in else 0
    out_x = np.empty(keep)
    out_y = np.empty(keep)
    out_z = np.empty(keep)
    cdef double[::1] ox = out_x
    cdef double[::1] oy = out_y
    cdef double[::1] oz = out_z
    cdef double x0 = nd[0]
    cdef double width = nd[nd.shape[0] - 1] - nd[0]
    cdef double w, ny, nz
    cdef Py_ssize_t i, n
    with nogil:
        for i in range(total):
            n = ch[i]
            w = (x - x0) / width
            ny = al[n] * y + be[n] * z + ((1.0 - w) * pa[n] + w * pb[n])
            nz = ga[n] * z + ((1.0 - w) * qa[n] + w * qb[n])
            x = (1.0 - w) * nd[n] + w * nd[n + 1]
            y = ny
            z = nz
            if i >= burn_in:
                ox[i - burn_in] = x
                oy[i - burn_in] = y
                oz[i - burn_in] = z
    return out_x, out_y, out_z


def evaluate_batch(xs, Py_ssize_t depth, nodes, ynodes, znodes, alpha, beta, gamma,
                   p0, pN, q0, qN, double seed_err1, double seed_err2,
                   double step_ulp=0.0, double snap_max=0.0):
    cdef const double[::1] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] yn = np.ascontiguousarray(ynodes, dtype=np.float64)
    cdef const double[::1] zn = np.ascontiguousarray(znodes, dtype=np.float64)
    cdef const double[::1] al = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef const double[::1] be = np.ascontiguousarray(beta, dtype=np.float64)
    cdef const double[::1] ga = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef const double[::1] pa = np.ascontiguousarray(p0, dtype=np.float64)
    cdef const double[::1] pb = np.ascontiguousarray(pN, dtype=np.float64)
    cdef const double[::1] qa = np.ascontiguousarray(q0, dtype=np.float64)
    cdef const double[::1] qb = np.ascontiguousarray(qN, dtype=np.float64)
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t N = nd.shape[0] - 1
    f1_arr = np.empty(m)
    f2_arr = np.empty(m)
    e1_arr = np.empty(m)
    e2_arr = np.empty(m)
    path_n_arr = np.empty(max(depth, 1), dtype=np.intp)
    path_w_arr = np.empty(max(depth, 1))
    cdef double[::1] f1 = f1_arr
    cdef double[::1] f2 = f2_arr
    cdef double[::1] e1o = e1_arr
    cdef double[::1] e2o = e2_arr
    cdef Py_ssize_t[::1] path_n = path_n_arr
    cdef double[::1] path_w = path_w_arr
    cdef double x0 = nd[0]
    cdef double xN = nd[N]
    cdef double width = xN - x0
    cdef double u, a, b, w, v1, v2, t1, e1, e2, env
    cdef Py_ssize_t j, i, steps, exact, s, n
    with nogil:
        for j in range(m):
            u = X[j]
            steps = 0
            exact = -1
            env = 0.0
            while True:
                i = _bisect_left(nd, u)
                if i <= N and nd[i] == u:
                    exact = i
                    break
                if env <= snap_max:
                    if i <= N and nd[i] - u <= env:
                        exact = i
                        break
                    if i >= 1 and u - nd[i - 1] <= env:
                        exact = i - 1
                        break
                if steps == depth:
                    break
                a = nd[i - 1]
                b = nd[i]
                w = (u - a) / (b - a)
                u = (1.0 - w) * x0 + w * xN
                env = env * (width / (b - a)) + step_ulp
                if u < x0:
                    u = x0
                elif u > xN:
                    u = xN
                path_n[steps] = i - 1
                path_w[steps] = (u - x0) / width
                steps += 1
            if exact >= 0:
                v1 = yn[exact]
                v2 = zn[exact]
                e1 = 0.0
                e2 = 0.0
            else:
                i = _bisect_left(nd, u)
                a = nd[i - 1]
                b = nd[i]
                w = (u - a) / (b - a)
                v1 = (1.0 - w) * yn[i - 1] + w * yn[i]
                v2 = (1.0 - w) * zn[i - 1] + w * zn[i]
                e1 = seed_err1
                e2 = seed_err2
            s = steps - 1
            while s >= 0:
                n = path_n[s]
                w = path_w[s]
                t1 = al[n] * v1 + be[n] * v2 + ((1.0 - w) * pa[n] + w * pb[n])
                v2 = ga[n] * v2 + ((1.0 - w) * qa[n] + w * qb[n])
                v1 = t1
                e1 = fabs(al[n]) * e1 + fabs(be[n]) * e2
                e2 = fabs(ga[n]) * e2
                s -= 1
            f1[j] = v1
            f2[j] = v2
            e1o[j] = e1
            e2o[j] = e2
    return f1_arr, f2_arr, e1_arr, e2_arr
