"""Spectral differentiation checked against symbolic derivatives."""

import numpy as np
import numpy.testing as npt
import pytest

sympy = pytest.importorskip("sympy")

from gcflow import body as B
from gcflow.flow import ck_proxy
from gcflow.grid import build_grid, differentiate


def test_circle_derivative_matches_sympy(circle):
    th = sympy.Symbol("theta")
    expr = sympy.cos(3 * th) * sympy.sin(2 * th) + sympy.Rational(1, 10) * sympy.cos(7 * th)
    theta = np.arctan2(circle.nodes[:, 1], circle.nodes[:, 0])
    f = sympy.lambdify(th, expr, "numpy")(theta)
    for order in (1, 2):
        ref = sympy.lambdify(th, sympy.diff(expr, th, order), "numpy")(theta)
        npt.assert_allclose(differentiate(f, circle, order), ref, atol=1e-9)


def test_ck_proxy_matches_symbolic_norms(circle):
    # proxy is taken on the volume-normalized body c*s with c = sqrt(pi / V),
    # V = (1/2) int s (s + s'') dtheta computed symbolically
    a = sympy.Rational(1, 100)
    th = sympy.Symbol("theta")
    s = 1 + a * sympy.cos(4 * th)
    V = sympy.integrate(s * (s + sympy.diff(s, th, 2)), (th, 0, 2 * sympy.pi)) / 2
    c = sympy.sqrt(sympy.pi / V)
    refs = {
        0: c - 1 + c * a,
        1: c - 1 + c * a * (1 + 4),
        2: c - 1 + c * a * (1 + 4 + 16),
    }
    field = B.support_from_spec(
        B.TrigPerturbation(1.0, ((4, 1.0, 0.0),), 0.01), circle
    )
    for k, ref in refs.items():
        npt.assert_allclose(ck_proxy(field, k), float(ref), rtol=1e-6)
