"""Convex bodies as sampled support functions, plus generators and geometry.

A body is represented only through its support function s(u) sampled on a
GridDescriptor. Pointwise convexity is the positive definiteness of
A = D2s + s*Id in the orthonormal spherical frame; sigma_{n-1} = det(A) is
the reciprocal Gauss curvature as a function of the outer normal.
"""

from dataclasses import dataclass, field as dfield

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import ConvexityViolation, GridMismatch, OptimizationFailure
from .grid import BALL_VOLUME, GridDescriptor, hessian_components, quadrature

CONVEXITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SupportField:
    """Sampled support function of a convex body on a fixed grid."""

    grid: GridDescriptor
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.node_count,):
            raise GridMismatch(
                f"support field length {v.shape} does not match grid "
                f"({self.grid.node_count} nodes)"
            )
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.grid.n


def _curvature(field):
    """(sigma, lam_min, lam_max) of A at every node; no convexity check."""
    g = field.grid
    if g.n == 2:
        sigma = kernels.curvature_2d(field.values, hessian_components(field.values, g))
        return sigma, sigma, sigma
    h11, h12, h22 = hessian_components(field.values, g)
    return kernels.curvature_3d(field.values, h11, h12, h22)


def convexity_margin(field):
    """Smallest eigenvalue of A over all nodes; > 0 means strictly convex."""
    _, lam_min, _ = _curvature(field)
    return float(lam_min.min())


def require_convex(field):
    scale = float(np.max(np.abs(field.values))) or 1.0
    margin = convexity_margin(field)
    if margin <= CONVEXITY_TOL * scale:
        raise ConvexityViolation(
            f"support field is not strictly convex (min eig of A = {margin:.3e})"
        )
    return field


def sigma(field):
    """sigma_{n-1} = det(A) at every node; raises if any value is <= 0."""
    sig, lam_min, _ = _curvature(field)
    if lam_min.min() <= 0.0:
        raise ConvexityViolation(
            f"sigma_{field.n - 1} not positive (min eig of A = {lam_min.min():.3e})"
        )
    return sig


def volume(field):
    """V(K) = (1/n) * integral of s * sigma_{n-1} over the sphere."""
    return quadrature(field.values * sigma(field), field.grid) / field.n


def diameter(field):
    """max_u s(u) + s(-u); the grid pairs nodes antipodally by construction."""
    v = field.values
    return float(np.max(v + v[field.grid.antipode]))


def inradius_circumradius(field):
    """(r_minus, incenter, r_plus, circumcenter) via two linear programs.

    r_minus = max_x min_i (s_i - x.u_i), r_plus = min_x max_i (s_i - x.u_i).
    """
    g = field.grid
    u = g.nodes
    s = field.values
    n = g.n

    c_in = np.zeros(n + 1)
    c_in[-1] = -1.0
    A_in = np.hstack([u, np.ones((g.node_count, 1))])
    res_in = linprog(c_in, A_ub=A_in, b_ub=s, bounds=[(None, None)] * (n + 1))

    c_out = np.zeros(n + 1)
    c_out[-1] = 1.0
    A_out = np.hstack([-u, -np.ones((g.node_count, 1))])
    res_out = linprog(c_out, A_ub=A_out, b_ub=-s, bounds=[(None, None)] * (n + 1))

    if not (res_in.success and res_out.success):
        raise OptimizationFailure("inradius/circumradius LP did not converge")
    return res_in.x[-1], res_in.x[:n].copy(), res_out.x[-1], res_out.x[:n].copy()


def pinching_ratio(field):
    """Global min principal curvature over global max, in (0, 1]."""
    _, lam_min, lam_max = _curvature(field)
    lo = lam_min.min()
    if lo <= 0.0:
        raise ConvexityViolation("pinching ratio undefined: body not strictly convex")
    # kappa = 1/lam, so min kappa / max kappa = min lam / max lam
    return float(lo / lam_max.max())


def normalize(field):
    """Rescale so the body has the volume of the unit ball."""
    lam = (BALL_VOLUME[field.n] / volume(field)) ** (1.0 / field.n)
    return SupportField(field.grid, lam * field.values)


def translate(field, x):
    """Support field of K - x: values s_i - x.u_i."""
    x = np.asarray(x, dtype=float)
    return SupportField(field.grid, field.values - field.grid.nodes @ x)


# ---------------------------------------------------------------------------
# Body generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    radius: float
    center: tuple = ()


@dataclass(frozen=True)
class Ellipsoid:
    semiaxes: tuple
    center: tuple = ()


@dataclass(frozen=True)
class SlicedBall:
    """Ball with two opposite caps of height cap_height removed, edges
    mollified over angular width smoothing (radians). Axis = last coordinate.

    The flat faces left by the cut are rounded by Minkowski-adding a ball of
    radius smoothing*radius/2; without it the field would only be weakly
    convex (A = 0 on the faces) and could not pass the strict convexity check.
    """

    radius: float
    cap_height: float
    smoothing: float


@dataclass(frozen=True)
class TrigPerturbation:
    """s = base_radius + amplitude * sum of terms.

    n=2 terms: (k, a, b) -> a*cos(k theta) + b*sin(k theta).
    n=3 terms: (l, m, c) -> c * real spherical harmonic Y_lm.
    """

    base_radius: float
    terms: tuple
    amplitude: float = 1.0


@dataclass(frozen=True)
class Scaled:
    factor: float
    body: object


@dataclass(frozen=True)
class Translated:
    offset: tuple
    body: object


@dataclass(frozen=True)
class MinkowskiSum:
    bodies: tuple


def _center(c, n):
    if c is None or len(c) == 0:
        return np.zeros(n)
    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"center/offset must have length {n}")
    return c


_GL64 = np.polynomial.legendre.leggauss(64)


def _piecewise_gauss(f, a, b, breakpoints):
    """Integrate f over [a, b] splitting at interior breakpoints."""
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    x0, w0 = _GL64
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * np.sum(w0 * f(mid + half * x0))
    return total


def _sliced_profile(psi, r, delta, rho):
    """Mollified support profile of the sliced ball as a function of the
    polar angle psi from the slicing axis."""
    h = r - delta
    edge = np.sqrt(r * r - h * h)
    psi_star = np.arccos(h / r)

    def raw(x):
        c = np.abs(np.cos(x))
        cap = h * c + edge * np.abs(np.sin(x))
        return np.where(c <= h / r, r, cap)

    def bump(a):
        out = np.zeros_like(a)
        inside = np.abs(a) < rho
        t = a[inside] / rho
        out[inside] = np.exp(-1.0 / (1.0 - t * t))
        return out

    norm = _piecewise_gauss(bump, -rho, rho, [])
    kinks = [m * np.pi + q for m in (-1, 0, 1) for q in (0.0, psi_star, -psi_star)]

    out = np.empty_like(psi)
    for i, p in enumerate(psi):
        val = _piecewise_gauss(
            lambda x: raw(x) * bump(p - x), p - rho, p + rho, kinks
        )
        out[i] = val / norm
    return out


def _real_harmonic(grid, l, m):
    """Real orthonormal spherical harmonic sampled at the n=3 grid nodes."""
    L = grid.resolution
    M = 2 * L
    P = grid._tables[0]
    if not (0 <= abs(m) <= l <= L - 1):
        raise ValueError(f"harmonic (l={l}, m={m}) outside grid band limit {L - 1}")
    lat = P[abs(m), l][:, None]
    lam = 2.0 * np.pi * np.arange(M) / M
    if m == 0:
        block = np.broadcast_to(lat, (L, M))
    elif m > 0:
        block = np.sqrt(2.0) * lat * np.cos(m * lam)[None, :]
    else:
        block = np.sqrt(2.0) * lat * np.sin(-m * lam)[None, :]
    return block.ravel()


def support_values(spec, grid):
    """Sample the analytic support function of a BodySpec (no convexity check)."""
    u = grid.nodes
    n = grid.n
    if isinstance(spec, Ball):
        if spec.radius <= 0:
            raise ValueError("ball radius must be positive")
        return spec.radius + u @ _center(spec.center, n)
    if isinstance(spec, Ellipsoid):
        a = np.asarray(spec.semiaxes, dtype=float)
        if a.shape != (n,) or np.any(a <= 0):
            raise ValueError(f"ellipsoid needs {n} positive semiaxes")
        return np.sqrt((u**2) @ (a**2)) + u @ _center(spec.center, n)
    if isinstance(spec, SlicedBall):
        r, d, rho = spec.radius, spec.cap_height, spec.smoothing
        if not (r > 0 and 0 < d < r and rho > 0):
            raise ValueError("sliced ball needs r > 0, 0 < cap_height < r, smoothing > 0")
        psi = np.arccos(np.clip(u[:, -1], -1.0, 1.0))
        return _sliced_profile(psi, r, d, rho) + 0.5 * rho * r
    if isinstance(spec, TrigPerturbation):
        s = np.full(grid.node_count, float(spec.base_radius))
        if n == 2:
            theta = np.arctan2(u[:, 1], u[:, 0])
            for k, a, b in spec.terms:
                s += spec.amplitude * (a * np.cos(k * theta) + b * np.sin(k * theta))
        else:
            for l, m, c in spec.terms:
                s += spec.amplitude * c * _real_harmonic(grid, int(l), int(m))
        return s
    if isinstance(spec, Scaled):
        if spec.factor <= 0:
            raise ValueError("scale factor must be positive")
        return spec.factor * support_values(spec.body, grid)
    if isinstance(spec, Translated):
        return support_values(spec.body, grid) + u @ _center(spec.offset, n)
    if isinstance(spec, MinkowskiSum):
        return sum(support_values(b, grid) for b in spec.bodies)
    raise TypeError(f"unknown body spec {type(spec).__name__}")


def support_from_spec(spec, grid):
    """Sample a BodySpec and verify strict convexity of the result."""
    return require_convex(SupportField(grid, support_values(spec, grid)))


# ---------------------------------------------------------------------------
# JSON serialization of body specs
# ---------------------------------------------------------------------------

_KINDS = {
    "ball": Ball,
    "ellipsoid": Ellipsoid,
    "sliced_ball": SlicedBall,
    "trig": TrigPerturbation,
    "scaled": Scaled,
    "translated": Translated,
    "minkowski": MinkowskiSum,
}


def spec_to_dict(spec):
    if isinstance(spec, Ball):
        return {"kind": "ball", "radius": spec.radius, "center": list(spec.center)}
    if isinstance(spec, Ellipsoid):
        return {
            "kind": "ellipsoid",
            "semiaxes": list(spec.semiaxes),
            "center": list(spec.center),
        }
    if isinstance(spec, SlicedBall):
        return {
            "kind": "sliced_ball",
            "radius": spec.radius,
            "cap_height": spec.cap_height,
            "smoothing": spec.smoothing,
        }
    if isinstance(spec, TrigPerturbation):
        return {
            "kind": "trig",
            "base_radius": spec.base_radius,
            "terms": [list(t) for t in spec.terms],
            "amplitude": spec.amplitude,
        }
    if isinstance(spec, Scaled):
        return {"kind": "scaled", "factor": spec.factor, "body": spec_to_dict(spec.body)}
    if isinstance(spec, Translated):
        return {
            "kind": "translated",
            "offset": list(spec.offset),
            "body": spec_to_dict(spec.body),
        }
    if isinstance(spec, MinkowskiSum):
        return {"kind": "minkowski", "bodies": [spec_to_dict(b) for b in spec.bodies]}
    raise TypeError(f"unknown body spec {type(spec).__name__}")


def spec_from_dict(d):
    kind = d.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"unknown body kind {kind!r}")
    if kind == "ball":
        return Ball(float(d["radius"]), tuple(d.get("center", ())))
    if kind == "ellipsoid":
        return Ellipsoid(tuple(d["semiaxes"]), tuple(d.get("center", ())))
    if kind == "sliced_ball":
        return SlicedBall(float(d["radius"]), float(d["cap_height"]), float(d["smoothing"]))
    if kind == "trig":
        return TrigPerturbation(
            float(d["base_radius"]),
            tuple(tuple(t) for t in d["terms"]),
            float(d.get("amplitude", 1.0)),
        )
    if kind == "scaled":
        return Scaled(float(d["factor"]), spec_from_dict(d["body"]))
    if kind == "translated":
        return Translated(tuple(d["offset"]), spec_from_dict(d["body"]))
    return MinkowskiSum(tuple(spec_from_dict(b) for b in d["bodies"]))
