"""Pure numpy implementations of the hot pointwise kernels.

Fallback for the Cython extension; signatures must match _kernels_cy.
"""

import numpy as np


def curvature_2d(s, s_tt):
    """sigma_1 = s'' + s at every node."""
    return s_tt + s


def curvature_3d(s, h11, h12, h22):
    """sigma_2 = det(A) with A = Hessian + s*Id, plus the eigenvalue range of A.

    Returns (sigma, lam_min, lam_max) arrays.
    """
    a11 = h11 + s
    a22 = h22 + s
    sigma = a11 * a22 - h12 * h12
    half_tr = 0.5 * (a11 + a22)
    disc = np.sqrt(np.maximum(0.25 * (a11 - a22) ** 2 + h12 * h12, 0.0))
    return sigma, half_tr - disc, half_tr + disc


def shrink_step(s, sigma, dt):
    """Explicit Euler update of the support field: s - dt / sigma."""
    return s - dt / sigma
