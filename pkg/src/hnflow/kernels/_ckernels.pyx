# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the float hot loops; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, floor, pow, sqrt
from libc.stdlib cimport llabs

from . import _pykernels

BACKEND = "cython"

cnp.import_array()


def enum_candidates(mu, bnorm2, int head, radius2, eta, int cap):
    if not isinstance(bnorm2[0], float):
        # exact Fraction enumeration stays in Python
        return _pykernels.enum_candidates(mu, bnorm2, head, radius2, eta, cap)
    cdef int n = len(bnorm2)
    cdef double[:, :] M = np.ascontiguousarray(np.asarray(mu, dtype=np.float64))
    cdef double[:] B = np.ascontiguousarray(np.asarray(bnorm2, dtype=np.float64))
    cdef long long[:] c = np.zeros(n, dtype=np.int64)
    cdef long long[:] c0 = np.zeros(n, dtype=np.int64)
    cdef long long[:] jump = np.zeros(n, dtype=np.int64)
    cdef long long[:] sgn = np.ones(n, dtype=np.int64)
    cdef double[:] center = np.zeros(n, dtype=np.float64)
    cdef double[:] partial = np.zeros(n + 1, dtype=np.float64)
    cdef char[:] zero_above = np.ones(n + 1, dtype=np.int8)
    cdef double R2 = radius2
    cdef double e = eta
    cdef double diff, p, s
    cdef long long ci, j
    cdef int k, jj
    found_p = []
    found_c = []
    k = n - 1
    c[k] = 0 if k > head else 1
    while True:
        diff = c[k] - center[k]
        p = partial[k + 1] + diff * diff * B[k]
        if p <= R2:
            if k > 0:
                partial[k] = p
                zero_above[k] = 1 if (zero_above[k + 1] and c[k] == 0) else 0
                k -= 1
                if zero_above[k + 1]:
                    center[k] = 0.0
                    c[k] = 0 if k > head else 1
                else:
                    s = 0.0
                    for jj in range(k + 1, n):
                        if c[jj] != 0:
                            s -= c[jj] * M[jj, k]
                    if fabs(s) > 1125899906842624.0:
                        return None
                    center[k] = s
                    ci = <long long> floor(s + 0.5)
                    c[k] = ci
                    c0[k] = ci
                    jump[k] = 0
                    sgn[k] = 1 if s >= ci else -1
                continue
            found_p.append(p)
            found_c.append(tuple(c))
            if p * (1 + e) < R2:
                R2 = p * (1 + e)
            if len(found_p) > 4 * cap + 16:
                keep = [i for i in range(len(found_p)) if found_p[i] <= R2]
                found_p = [found_p[i] for i in keep]
                found_c = [found_c[i] for i in keep]
                if len(found_p) > cap:
                    return None
        else:
            k += 1
            if k == n:
                break
        if zero_above[k + 1]:
            c[k] += 1
        else:
            jump[k] += 1
            j = jump[k]
            c[k] = c0[k] + sgn[k] * ((j + 1) // 2) * (1 if j % 2 else -1)
    found = [(found_p[i], found_c[i]) for i in range(len(found_p)) if found_p[i] <= R2]
    if not found:
        return []
    limit = min(f[0] for f in found) * (1 + eta)
    out = sorted(f for f in found if f[0] <= limit)
    if len(out) > cap:
        return None
    return out


cdef long long _gcd(long long a, long long b):
    a = llabs(a)
    b = llabs(b)
    while b:
        a, b = b, a % b
    return a


def scan_prefilter(Lf, long long N, double eps, double slack):
    cdef double[:, :] L = np.ascontiguousarray(np.asarray(Lf, dtype=np.float64))
    cdef int d = L.shape[0]
    if d == 1:
        return np.array([[1]], dtype=np.int64)
    cdef double rel = slack + 4 * d * 2.0 ** -52
    cdef long long[:] x = np.zeros(d, dtype=np.int64)
    cdef int i, j, lead
    cdef double v, e, lo, prod, n2, rhs
    cdef long long g
    out = []
    # odometer over [-N, N]^d, keeping the half-space with first nonzero > 0
    for i in range(d):
        x[i] = -N
    x[0] = 0
    while True:
        lead = 0
        while lead < d and x[lead] == 0:
            lead += 1
        if lead < d and x[lead] > 0:
            prod = 1.0
            n2 = 0.0
            for i in range(d):
                v = 0.0
                e = 0.0
                for j in range(d):
                    v += L[i, j] * x[j]
                    e += fabs(L[i, j]) * llabs(x[j])
                lo = fabs(v) - e * rel
                if lo < 0:
                    lo = 0.0
                prod *= lo
                n2 += (<double> x[i]) * x[i]
            # the right-hand side never exceeds 1, so most points stop here
            if prod <= 1.000000001:
                rhs = pow(n2, -eps / 2.0) * (1 + 1e-9)
                if prod <= rhs:
                    g = 0
                    for i in range(d):
                        g = _gcd(g, x[i])
                    if g == 1:
                        out.append(tuple(x))
        # increment
        i = d - 1
        while i >= 0:
            if x[i] < N:
                x[i] += 1
                break
            x[i] = -N
            i -= 1
        if i < 0:
            break
        if i == 0 and x[0] > N:
            break
    if not out:
        return np.zeros((0, d), dtype=np.int64)
    return np.array(out, dtype=np.int64)
