"""Entropy functionals, optimizing points, metrics, and inequality checks.

Central objects:
  entropy      E(K)   = sup_x  int log(s - x.u) dtheta   (maximizer e)
  entropy_p    E_p(K) = inf_x  int (s - x.u)^p dtheta, p in [-n, -1]  (e_p)
  santalo      e_{-n}
  hausdorff / delta2 distances between support fields
  signed-margin checks for the entropy chain, the Vitale bound, the
  Blaschke-Santalo inequality, and the explicit stability lemma.

All chain/Vitale/stability checks assume V(K) = V(B); callers normalize.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import beta as beta_integral

from .body import (
    SupportField,
    diameter,
    inradius_circumradius,
    normalize,
    pinching_ratio,
    translate,
    volume,
)
from .errors import GridMismatch, LineSearchFailure, NotNormalized
from .grid import BALL_VOLUME, SPHERE_AREA, quadrature

GRAD_TOL = 1e-10
NORMALIZED_RTOL = 1e-8


def _steiner_point(field):
    """(n / area) * int s u dtheta; interior for every convex body."""
    g = field.grid
    return g.n * (g.weights * field.values) @ g.nodes / SPHERE_AREA[g.n]


def _interior_start(field):
    x0 = _steiner_point(field)
    if np.min(field.values - field.grid.nodes @ x0) > 0:
        return x0
    _, center, _, _ = inradius_circumradius(field)  # fallback, should not trigger
    return center


def _newton(field, value_grad_hess, x0, maximize):
    """Damped Newton with Armijo backtracking, iterates kept interior.

    value_grad_hess(x, margins) -> (F, grad, hess) where margins = s - x.u.
    The log/power barrier blows up at the boundary, so feasibility is
    enforced by rejecting steps with nonpositive margin.
    """
    g = field.grid
    u = g.nodes
    s = field.values
    sign = -1.0 if maximize else 1.0
    x = np.asarray(x0, dtype=float).copy()
    m = s - u @ x
    if np.min(m) <= 0:
        raise LineSearchFailure("start point not interior")
    F, grad, hess = value_grad_hess(x, m)
    for _ in range(100):
        if np.linalg.norm(grad) <= GRAD_TOL * (1.0 + abs(F)):
            # curvature certificate: definite Hessian of the right sign
            eigs = np.linalg.eigvalsh(hess)
            if np.max(-sign * eigs) >= 0:
                raise LineSearchFailure("optimum without definite Hessian")
            return F, x
        dx = np.linalg.solve(hess, -grad)
        slope = grad @ dx
        if abs(slope) <= 1e-14 * (1.0 + abs(F)):
            # Newton decrement below rounding noise of F: converged
            eigs = np.linalg.eigvalsh(hess)
            if np.max(-sign * eigs) >= 0:
                raise LineSearchFailure("optimum without definite Hessian")
            return F, x
        if sign * slope >= 0:  # not a descent direction for sign*F; fall back
            dx = -sign * grad
            slope = grad @ dx
        t = 1.0
        for _ in range(60):
            xt = x + t * dx
            mt = s - u @ xt
            if np.min(mt) > 0:
                Ft, gt, ht = value_grad_hess(xt, mt)
                if sign * (Ft - F) <= 0.25 * t * sign * slope:
                    x, m, F, grad, hess = xt, mt, Ft, gt, ht
                    break
            t *= 0.5
        else:
            raise LineSearchFailure("Armijo backtracking failed to make progress")
    raise LineSearchFailure("Newton did not converge in 100 iterations")


def entropy(field):
    """(E, e): maximum and maximizer of int log(s - x.u) dtheta."""
    g = field.grid
    w, u = g.weights, g.nodes

    def fgh(x, m):
        F = float(w @ np.log(m))
        inv = w / m
        grad = -u.T @ inv
        hess = -(u * (inv / m)[:, None]).T @ u
        return F, grad, hess

    return _newton(field, fgh, _interior_start(field), maximize=True)


def entropy_p(field, p):
    """(E_p, e_p): minimum and minimizer of int (s - x.u)^p dtheta, p in [-n, -1]."""
    if not (-field.n <= p <= -1) or int(p) != p:
        raise ValueError(f"p must be an integer in [-{field.n}, -1], got {p}")
    p = float(p)
    g = field.grid
    w, u = g.weights, g.nodes

    def fgh(x, m):
        mp = m**p
        F = float(w @ mp)
        c1 = w * mp / m
        grad = -p * (u.T @ c1)
        hess = p * (p - 1.0) * (u * (c1 / m)[:, None]).T @ u
        return F, grad, hess

    return _newton(field, fgh, _interior_start(field), maximize=False)


def santalo_point(field):
    """Minimizer of int (s - x.u)^{-n} dtheta; equals e_{-n}."""
    return entropy_p(field, -field.n)[1]


def _require_normalized(field):
    vb = BALL_VOLUME[field.n]
    v = volume(field)
    if abs(v - vb) > NORMALIZED_RTOL * vb:
        raise NotNormalized(f"V(K) = {v:.12g}, expected V(B) = {vb:.12g}")


def check_entropy_chain(field):
    """Signed margins of exp(-E/nV(B)) <= E_-1/nV(B) <= sqrt(E_-2/nV(B)) <= ... <= 1.

    Returns the list of consecutive differences (later term minus earlier);
    all should be >= -1e-9 for a normalized body.
    """
    _require_normalized(field)
    n = field.n
    nvb = n * BALL_VOLUME[n]
    terms = [np.exp(-entropy(field)[0] / nvb)]
    for k in range(1, n + 1):
        terms.append((entropy_p(field, -k)[0] / nvb) ** (1.0 / k))
    terms.append(1.0)
    return [terms[i + 1] - terms[i] for i in range(len(terms) - 1)]


def hausdorff(a, b):
    """sup_u |s_a - s_b| over the grid nodes."""
    if a.grid is not b.grid:
        raise GridMismatch("fields live on different grids")
    return float(np.max(np.abs(a.values - b.values)))


def delta2(a, b):
    """L2 distance of support functions over the sphere."""
    if a.grid is not b.grid:
        raise GridMismatch("fields live on different grids")
    return float(np.sqrt(quadrature((a.values - b.values) ** 2, a.grid)))


def vitale_constant(n):
    """alpha_n = n V(B) beta(3, n-1) / beta(1/2, (n-1)/2)."""
    if n not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {n}")
    return n * BALL_VOLUME[n] * beta_integral(3, n - 1) / beta_integral(0.5, (n - 1) / 2.0)


def check_vitale(a, b):
    """Margin of delta2^2 >= alpha_n D(conv(K u L))^{1-n} hausdorff^{n+1}."""
    if a.grid is not b.grid:
        raise GridMismatch("fields live on different grids")
    n = a.n
    dh = hausdorff(a, b)
    if dh == 0.0:
        return 0.0
    upper = np.maximum(a.values, b.values)
    D = float(np.max(upper + upper[a.grid.antipode]))
    return delta2(a, b) ** 2 - vitale_constant(n) * D ** (1 - n) * dh ** (n + 1)


def check_blaschke_santalo(field):
    """Margin of V(K) * E_{-n}(K) <= n V(B)^2 (equality exactly for ellipsoids)."""
    n = field.n
    e_n = entropy_p(field, -n)[0]
    return n * BALL_VOLUME[n] ** 2 - volume(field) * e_n


def lemma_stab_bound(field):
    """Explicit stability bound for a normalized body.

    With eps = 1 - E_{-1}/(nV(B)) and s2 the support of K - e_{-2}(K):
      lhs = max|s2 - r|^{n+1},  r = sqrt(int dtheta / int s2^{-2} dtheta),
      rhs = (2nV(B)/alpha_n) D(K)^2 (D(K) + 2/(1-eps))^{n-1} eps,
    and 1 <= r <= 1/(1-eps). Returns (lhs, rhs, r, (1.0, 1/(1-eps))).
    """
    _require_normalized(field)
    n = field.n
    nvb = n * BALL_VOLUME[n]
    eps = max(1.0 - entropy_p(field, -1)[0] / nvb, 0.0)
    _, e2 = entropy_p(field, -2)
    s2 = translate(field, e2)
    r = float(np.sqrt(SPHERE_AREA[n] / quadrature(s2.values**-2.0, field.grid)))
    lhs = float(np.max(np.abs(s2.values - r))) ** (n + 1)
    D = diameter(field)
    rhs = (2.0 * nvb / vitale_constant(n)) * D**2 * (D + 2.0 / (1.0 - eps)) ** (n - 1) * eps
    return lhs, rhs, r, (1.0, 1.0 / (1.0 - eps))


def stability_gap(field):
    """(eps, gap, ratio): entropy of the normalized body, Hausdorff gap of the
    recentered normalized body to the unit ball, and gap / eps^{1/(n+1)}.

    ratio is None when eps <= 1e-12 (no gamma_n estimate from noise).
    """
    kn = normalize(field)
    eps, e = entropy(kn)
    gap = float(np.max(np.abs(kn.values - kn.grid.nodes @ e - 1.0)))
    ratio = gap / eps ** (1.0 / (field.n + 1)) if eps > 1e-12 else None
    return eps, gap, ratio


@dataclass
class FunctionalReport:
    """All scalar diagnostics for one (normalized) body."""

    n: int
    entropy: float
    entropy_point: np.ndarray
    entropy_p: dict  # p -> value
    entropy_p_points: dict  # p -> point
    santalo: np.ndarray
    diameter: float
    inradius: float
    circumradius: float
    pinching: float
    chain_margins: list
    vitale_vs_ball_margin: float
    blaschke_santalo_margin: float
    stability_eps: float
    stability_gap: float
    stability_ratio: float | None
    lemma_stab_lhs: float
    lemma_stab_rhs: float
    lemma_stab_r: float
    lemma_stab_r_bounds: tuple

    def margins(self):
        """Every inequality margin that must be nonnegative (up to slack)."""
        out = {f"chain_{i}": m for i, m in enumerate(self.chain_margins)}
        out["vitale_vs_ball"] = self.vitale_vs_ball_margin
        out["blaschke_santalo"] = self.blaschke_santalo_margin / (
            self.n * BALL_VOLUME[self.n] ** 2
        )
        out["lemma_stab"] = self.lemma_stab_rhs - self.lemma_stab_lhs
        out["lemma_r_lower"] = self.lemma_stab_r - self.lemma_stab_r_bounds[0]
        out["lemma_r_upper"] = self.lemma_stab_r_bounds[1] - self.lemma_stab_r
        return out

    def to_dict(self):
        return {
            "n": self.n,
            "entropy": self.entropy,
            "entropy_point": list(self.entropy_point),
            **{f"entropy_m{-p}": v for p, v in self.entropy_p.items()},
            **{f"entropy_m{-p}_point": list(x) for p, x in self.entropy_p_points.items()},
            "santalo_point": list(self.santalo),
            "diameter": self.diameter,
            "inradius": self.inradius,
            "circumradius": self.circumradius,
            "pinching": self.pinching,
            "chain_margins": list(self.chain_margins),
            "vitale_vs_ball_margin": self.vitale_vs_ball_margin,
            "blaschke_santalo_margin": self.blaschke_santalo_margin,
            "stability_eps": self.stability_eps,
            "stability_gap": self.stability_gap,
            "stability_ratio": self.stability_ratio,
            "lemma_stab_lhs": self.lemma_stab_lhs,
            "lemma_stab_rhs": self.lemma_stab_rhs,
            "lemma_stab_r": self.lemma_stab_r,
            "lemma_stab_r_bounds": list(self.lemma_stab_r_bounds),
        }


def functional_report(field):
    """Evaluate all functionals on the volume-normalized body."""
    kn = normalize(field)
    n = kn.n
    E, e = entropy(kn)
    ep, epp = {}, {}
    for p in range(-1, -n - 1, -1):
        ep[p], epp[p] = entropy_p(kn, p)
    rm, _, rp, _ = inradius_circumradius(kn)
    eps, gap, ratio = stability_gap(kn)
    lhs, rhs, r, rb = lemma_stab_bound(kn)
    ball = SupportField(kn.grid, np.ones(kn.grid.node_count))
    return FunctionalReport(
        n=n,
        entropy=E,
        entropy_point=e,
        entropy_p=ep,
        entropy_p_points=epp,
        santalo=epp[-n],
        diameter=diameter(kn),
        inradius=rm,
        circumradius=rp,
        pinching=pinching_ratio(kn),
        chain_margins=check_entropy_chain(kn),
        vitale_vs_ball_margin=check_vitale(kn, ball),
        blaschke_santalo_margin=check_blaschke_santalo(kn),
        stability_eps=eps,
        stability_gap=gap,
        stability_ratio=ratio,
        lemma_stab_lhs=lhs,
        lemma_stab_rhs=rhs,
        lemma_stab_r=r,
        lemma_stab_r_bounds=rb,
    )
