"""Discretization of S^1 and S^2 with spectral quadrature and differentiation.

n=2: N equally spaced angles on the circle, uniform trapezoid weights (exact
for trigonometric polynomials of degree < N/2), FFT differentiation.

n=3: tensor grid of L Gauss-Legendre latitudes x 2L uniform longitudes.
Quadrature is exact for spherical harmonics up to degree 2L-2. Differentiation
goes through a spherical-harmonic transform truncated at lmax = L-1:
FFT in longitude, normalized associated-Legendre projection in latitude.
Covariant derivatives are returned in the orthonormal frame
(e_theta, e_lambda/sin theta); nodes never sit on the poles.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch

SPHERE_AREA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}
BALL_VOLUME = {2: np.pi, 3: 4.0 * np.pi / 3.0}


def _legendre_tables(lmax, mu, sin_t, cot_t):
    """Normalized associated Legendre values and theta-derivatives at mu.

    Returns arrays of shape (lmax+1, lmax+1, L) indexed [m, l, i]; entries
    with l < m are zero. Normalization is that of orthonormal complex
    spherical harmonics Y_lm = P[m,l] * exp(i m lambda).
    """
    L = mu.size
    P = np.zeros((lmax + 1, lmax + 1, L))
    dP = np.zeros_like(P)
    d2P = np.zeros_like(P)

    P[0, 0] = np.sqrt(1.0 / (4.0 * np.pi))
    for m in range(1, lmax + 1):
        P[m, m] = np.sqrt((2 * m + 1) / (2.0 * m)) * sin_t * P[m - 1, m - 1]
    for m in range(lmax + 1):
        if m + 1 <= lmax:
            P[m, m + 1] = np.sqrt(2 * m + 3.0) * mu * P[m, m]
        for l in range(m + 2, lmax + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            P[m, l] = a * (mu * P[m, l - 1] - b * P[m, l - 2])

    inv_sin = 1.0 / sin_t
    for m in range(lmax + 1):
        for l in range(m, lmax + 1):
            acc = l * mu * P[m, l]
            if l > m:
                acc = acc - np.sqrt((2 * l + 1.0) * (l * l - m * m) / (2 * l - 1.0)) * P[m, l - 1]
            dP[m, l] = inv_sin * acc
            # Legendre ODE in theta: y'' = -cot(theta) y' - (l(l+1) - m^2/sin^2) y
            d2P[m, l] = -cot_t * dP[m, l] - (l * (l + 1.0) - m * m * inv_sin**2) * P[m, l]
    return P, dP, d2P


@dataclass(frozen=True, eq=False)
class GridDescriptor:
    """Immutable discretization of S^{n-1}, n in {2, 3}.

    nodes[i] are unit vectors, weights[i] positive quadrature weights summing
    to the sphere area. antipode[i] is the node index of -nodes[i].
    """

    n: int
    resolution: int
    nodes: np.ndarray
    weights: np.ndarray
    antipode: np.ndarray
    # n=3 internals (None for n=2)
    theta: np.ndarray | None = field(default=None, repr=False)
    _tables: tuple | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def node_count(self):
        return self.nodes.shape[0]

    @property
    def spacing(self):
        """Nominal mesh width h used for explicit time-step control."""
        if self.n == 2:
            return 2.0 * np.pi / self.resolution
        return np.pi / self.resolution

    # ---- spectral transforms -------------------------------------------

    def _check(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.node_count,):
            raise GridMismatch(
                f"field of length {values.shape} does not match grid with "
                f"{self.node_count} nodes"
            )
        return values

    def _fourier(self, values):
        """n=2 only: rfft coefficients of the field."""
        return np.fft.rfft(values)

    def _analysis(self, values):
        """n=3 only: spherical-harmonic coefficients a[m, l] (complex)."""
        L = self.resolution
        M = 2 * L
        An = self._tables[3]
        G = values.reshape(L, M)
        Fm = np.fft.rfft(G, axis=1)[:, : L] * (2.0 * np.pi / M)
        return np.einsum("mli,im->ml", An, Fm)

    def _synthesis(self, a, table):
        """n=3 only: evaluate sum_lm a[m,l] table[m,l,:] e^{i m lambda} (real part)."""
        L = self.resolution
        M = 2 * L
        C = np.einsum("mli,ml->im", table, a)
        Cfull = np.zeros((L, M // 2 + 1), dtype=complex)
        Cfull[:, :L] = C
        return np.fft.irfft(Cfull * M, n=M, axis=1).reshape(-1)

    def derivative_fields(self, values):
        """All partials needed for covariant calculus, as a dict of flat arrays.

        n=2 keys: f, f1 (d/dtheta), f2 (d2/dtheta2).
        n=3 keys: f, ft, fl, ftt, ftl, fll (theta/lambda partials).
        """
        values = self._check(values)
        if self.n == 2:
            N = self.resolution
            fk = self._fourier(values)
            k = np.arange(fk.size)
            f1 = np.fft.irfft(1j * k * fk, n=N)
            f2 = np.fft.irfft(-(k**2) * fk, n=N)
            return {"f": values, "f1": f1, "f2": f2}

        L = self.resolution
        M = 2 * L
        Tstack, qfac = self._tables[4], self._tables[5]
        a = self._analysis(values)
        # all five partials in one stacked synthesis: ft, fl, ftt, ftl, fll
        C = np.einsum("kmli,kml->kim", Tstack, qfac[:, :, None] * a[None, :, :])
        Cfull = np.zeros((5, L, M // 2 + 1), dtype=complex)
        Cfull[:, :, :L] = C
        out = np.fft.irfft(Cfull * M, n=M, axis=2).reshape(5, -1)
        return {
            "f": values,
            "ft": out[0],
            "fl": out[1],
            "ftt": out[2],
            "ftl": out[3],
            "fll": out[4],
        }

    def spectral_power(self, values, order):
        """Field with |derivative| multiplier of given order, for C^k proxies.

        n=2: order-th FFT derivative. n=3: (-Laplacian)^{order/2} via the
        (l(l+1))^{order/2} multiplier.
        """
        values = self._check(values)
        if order == 0:
            return values
        if self.n == 2:
            fk = self._fourier(values)
            k = np.arange(fk.size)
            return np.fft.irfft((1j * k) ** order * fk, n=self.resolution)
        P = self._tables[0]
        a = self._analysis(values)
        ell = np.arange(a.shape[1])[None, :]
        mult = (ell * (ell + 1.0)) ** (order / 2.0)
        return self._synthesis(mult * a, P)


def build_grid(n, resolution):
    """Build a GridDescriptor for S^{n-1}.

    resolution is the angle count N for n=2 and the latitude count L for n=3
    (longitude count is 2L). Must be even and >= 8.
    """
    if n not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {n}")
    if resolution < 8 or resolution % 2 != 0:
        raise ValueError(f"resolution must be even and >= 8, got {resolution}")

    if n == 2:
        N = resolution
        ang = 2.0 * np.pi * np.arange(N) / N
        nodes = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        weights = np.full(N, 2.0 * np.pi / N)
        antipode = (np.arange(N) + N // 2) % N
        return GridDescriptor(2, N, nodes, weights, antipode)

    L = resolution
    M = 2 * L
    mu, glw = np.polynomial.legendre.leggauss(L)
    mu = 0.5 * (mu - mu[::-1])  # enforce exact antipodal symmetry
    glw = 0.5 * (glw + glw[::-1])
    theta = np.arccos(mu)
    sin_t = np.sin(theta)
    cot_t = mu / sin_t
    lam = 2.0 * np.pi * np.arange(M) / M

    st = sin_t[:, None]
    nodes = np.stack(
        [
            (st * np.cos(lam)[None, :]).ravel(),
            (st * np.sin(lam)[None, :]).ravel(),
            np.broadcast_to(mu[:, None], (L, M)).ravel(),
        ],
        axis=1,
    )
    weights = np.broadcast_to((glw * 2.0 * np.pi / M)[:, None], (L, M)).ravel().copy()

    i = np.arange(L)[:, None]
    j = np.arange(M)[None, :]
    antipode = ((L - 1 - i) * M + (j + M // 2) % M).ravel()

    lmax = L - 1
    P, dP, d2P = _legendre_tables(lmax, mu, sin_t, cot_t)
    An = P * glw[None, None, :]
    # stacked synthesis operators for (ft, fl, ftt, ftl, fll)
    Tstack = np.stack([dP, P, d2P, dP, P])
    m = np.arange(L)
    qfac = np.stack([np.ones(L), 1j * m, np.ones(L), 1j * m, -(m**2.0)]).astype(complex)
    sin_flat = np.broadcast_to(sin_t[:, None], (L, M)).ravel().copy()
    cot_flat = np.broadcast_to(cot_t[:, None], (L, M)).ravel().copy()
    return GridDescriptor(
        3,
        L,
        nodes,
        weights,
        antipode,
        theta=theta,
        _tables=(P, dP, d2P, An, Tstack, qfac, sin_flat, cot_flat),
    )


def quadrature(values, grid):
    """sum_i w_i f_i, approximating the surface integral over S^{n-1}."""
    values = grid._check(values)
    return float(grid.weights @ values)


def differentiate(values, grid, order):
    """Covariant derivatives of a scalar field in an orthonormal frame.

    order=1: n=2 -> f' (shape N); n=3 -> gradient, shape (N, 2).
    order=2: n=2 -> f'' (shape N); n=3 -> covariant Hessian, shape (N, 2, 2).
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    d = grid.derivative_fields(values)
    if grid.n == 2:
        return d["f1"] if order == 1 else d["f2"]
    h11, h12, h22, g1, g2 = _frame_components(grid, d)
    if order == 1:
        return np.stack([g1, g2], axis=1)
    H = np.empty((grid.node_count, 2, 2))
    H[:, 0, 0] = h11
    H[:, 0, 1] = H[:, 1, 0] = h12
    H[:, 1, 1] = h22
    return H


def _frame_components(grid, d):
    """Orthonormal-frame gradient and Hessian components on S^2.

    Round-metric Christoffel corrections in latitude/longitude coordinates:
    H_tt = f_tt, H_tl = f_tl - cot f_l, H_ll = f_ll + sin cos f_t,
    then rescaled by the frame factors 1/sin theta.
    """
    sin_t, cot_t = grid._tables[6], grid._tables[7]
    inv_sin = 1.0 / sin_t
    h11 = d["ftt"]
    h12 = (d["ftl"] - cot_t * d["fl"]) * inv_sin
    h22 = d["fll"] * inv_sin**2 + cot_t * d["ft"]
    return h11, h12, h22, d["ft"], d["fl"] * inv_sin


# below this node count a cached dense operator beats the transform round-trip
_DENSE_LIMIT = 1200


def _dense_hessian_op(grid):
    """(3, N, N) matrix sending support values to (h11, h12, h22); n=3 only."""
    op = grid._cache.get("hessian_op")
    if op is None:
        N = grid.node_count
        op = np.empty((3, N, N))
        e = np.zeros(N)
        for j in range(N):
            e[j] = 1.0
            d = grid.derivative_fields(e)
            h11, h12, h22, _, _ = _frame_components(grid, d)
            op[0, :, j], op[1, :, j], op[2, :, j] = h11, h12, h22
            e[j] = 0.0
        grid._cache["hessian_op"] = op
    return op


def hessian_components(values, grid):
    """Pieces needed for sigma_{n-1}: n=2 returns f''; n=3 returns (h11, h12, h22)."""
    if grid.n == 3 and grid.node_count <= _DENSE_LIMIT:
        H = _dense_hessian_op(grid) @ values
        return H[0], H[1], H[2]
    d = grid.derivative_fields(values)
    if grid.n == 2:
        return d["f2"]
    h11, h12, h22, _, _ = _frame_components(grid, d)
    return h11, h12, h22
