# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython implementations of the hot pointwise kernels.

Same signatures as _kernels_py; fused loops avoid the intermediate arrays
the numpy fallback allocates.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def curvature_2d(double[::1] s, double[::1] s_tt):
    """sigma_1 = s'' + s at every node."""
    cdef Py_ssize_t i, n = s.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = s_tt[i] + s[i]
    return out


def curvature_3d(double[::1] s, double[::1] h11, double[::1] h12, double[::1] h22):
    """sigma_2 = det(A) with A = Hessian + s*Id, plus the eigenvalue range of A.

    Returns (sigma, lam_min, lam_max) arrays.
    """
    cdef Py_ssize_t i, n = s.shape[0]
    sigma = np.empty(n)
    lmin = np.empty(n)
    lmax = np.empty(n)
    cdef double[::1] sg = sigma, lo = lmin, hi = lmax
    cdef double a11, a22, a12, half_tr, disc
    for i in range(n):
        a11 = h11[i] + s[i]
        a22 = h22[i] + s[i]
        a12 = h12[i]
        sg[i] = a11 * a22 - a12 * a12
        half_tr = 0.5 * (a11 + a22)
        disc = 0.25 * (a11 - a22) * (a11 - a22) + a12 * a12
        disc = sqrt(disc if disc > 0.0 else 0.0)
        lo[i] = half_tr - disc
        hi[i] = half_tr + disc
    return sigma, lmin, lmax


def shrink_step(double[::1] s, double[::1] sigma, double dt):
    """Explicit Euler update of the support field: s - dt / sigma."""
    cdef Py_ssize_t i, n = s.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = s[i] - dt / sigma[i]
    return out
