import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcflow import body as B
from gcflow import functionals as F
from gcflow.errors import GridMismatch, NotNormalized
from gcflow.grid import BALL_VOLUME, build_grid

from oracles import (
    entropy_objective,
    entropy_p_objective,
    lattice_argmax,
    lattice_argmin,
)


def norm_ellipse(grid, a=2.0, b=1.0):
    return B.normalize(B.support_from_spec(B.Ellipsoid((a, b)), grid))


def test_entropy_of_unit_ball(circle):
    f = B.support_from_spec(B.Ball(1.0), circle)
    E, e = F.entropy(f)
    npt.assert_allclose(E, 0.0, atol=1e-12)
    npt.assert_allclose(e, 0.0, atol=1e-10)


def test_entropy_point_of_translated_ball(circle):
    f = B.support_from_spec(B.Ball(1.0, (0.3, -0.1)), circle)
    E, e = F.entropy(f)
    npt.assert_allclose(E, 0.0, atol=1e-12)
    npt.assert_allclose(e, (0.3, -0.1), atol=1e-10)


def test_entropy_matches_lattice_oracle(circle):
    f = norm_ellipse(circle)
    E, e = F.entropy(f)
    E0, x0, cell = lattice_argmax(f, entropy_objective(f), 0.5)
    assert np.linalg.norm(e - x0) <= np.sqrt(2) * cell
    assert E >= E0 - 1e-12


def test_entropy_p_matches_lattice_oracle(circle):
    f = norm_ellipse(circle)
    for p in (-1, -2):
        Ep, ep = F.entropy_p(f, p)
        E0, x0, cell = lattice_argmin(f, entropy_p_objective(f, p), 0.5)
        assert np.linalg.norm(ep - x0) <= np.sqrt(2) * cell
        assert Ep <= E0 + 1e-12


def test_entropy_p_rejects_bad_p(circle):
    f = B.support_from_spec(B.Ball(1.0), circle)
    with pytest.raises(ValueError):
        F.entropy_p(f, -3)
    with pytest.raises(ValueError):
        F.entropy_p(f, -1.5)


def test_santalo_point_is_e_minus_n(circle):
    f = norm_ellipse(circle, 1.7, 1.0)
    npt.assert_allclose(F.santalo_point(f), F.entropy_p(f, -2)[1], atol=1e-10)


def test_chain_requires_normalized(circle):
    f = B.support_from_spec(B.Ball(2.0), circle)
    with pytest.raises(NotNormalized):
        F.check_entropy_chain(f)


def test_chain_margins_nonnegative(circle, sphere):
    for f in (norm_ellipse(circle), B.normalize(
        B.support_from_spec(B.Ellipsoid((1.5, 1.0, 0.8)), sphere)
    )):
        margins = F.check_entropy_chain(f)
        assert len(margins) == f.n + 1
        assert all(m >= -1e-9 for m in margins)


def test_hausdorff_and_delta2(circle):
    a = B.support_from_spec(B.Ball(1.0), circle)
    b = B.support_from_spec(B.Ball(1.3), circle)
    assert F.hausdorff(a, b) == pytest.approx(0.3, abs=1e-14)
    npt.assert_allclose(F.delta2(a, b), 0.3 * np.sqrt(2 * np.pi), rtol=1e-12)
    with pytest.raises(GridMismatch):
        F.hausdorff(a, B.support_from_spec(B.Ball(1.0), build_grid(2, 64)))


def test_vitale_constants():
    npt.assert_allclose(F.vitale_constant(2), 2.0 / 3.0, rtol=1e-13)
    npt.assert_allclose(F.vitale_constant(3), np.pi / 6.0, rtol=1e-13)
    with pytest.raises(ValueError):
        F.vitale_constant(4)


def test_vitale_hand_value(circle):
    # balls of radius 2 and 1: delta2^2 = 2pi, D = 4, hausdorff = 1
    a = B.support_from_spec(B.Ball(2.0), circle)
    b = B.support_from_spec(B.Ball(1.0), circle)
    margin = F.check_vitale(a, b)
    npt.assert_allclose(margin, 2 * np.pi - (2.0 / 3.0) / 4.0, rtol=1e-10)


def test_vitale_inequality_random_pairs(circle, rng):
    for _ in range(10):
        c = 0.05 * rng.standard_normal(2)
        a = B.support_from_spec(B.Ellipsoid((1.0 + rng.random(), 1.0), tuple(c)), circle)
        b = B.support_from_spec(B.Ball(1.0), circle)
        assert F.check_vitale(a, b) >= -1e-10


def test_blaschke_santalo_equality_for_ellipsoids(circle, sphere):
    # equality cases: margin vanishes for centered ellipsoids
    f = B.support_from_spec(B.Ellipsoid((2.0, 1.0)), circle)
    assert abs(F.check_blaschke_santalo(f)) <= 1e-6 * BALL_VOLUME[2] ** 2 * 2
    f3 = B.support_from_spec(B.Ellipsoid((1.5, 1.0, 0.8)), sphere)
    assert abs(F.check_blaschke_santalo(f3)) <= 1e-4 * BALL_VOLUME[3] ** 2 * 3


def test_lemma_stab_bound(circle):
    f = norm_ellipse(circle, 1.3, 1.0)
    lhs, rhs, r, (lo, hi) = F.lemma_stab_bound(f)
    assert lhs <= rhs
    assert lo - 1e-12 <= r <= hi + 1e-12


def test_stability_gap_ball_degenerate(circle):
    f = B.support_from_spec(B.Ball(1.0), circle)
    eps, gap, ratio = F.stability_gap(f)
    assert eps == pytest.approx(0.0, abs=1e-12)
    assert ratio is None


def test_stability_gap_scale_invariant(circle):
    f1 = B.support_from_spec(B.Ellipsoid((2.0, 1.0)), circle)
    f2 = B.support_from_spec(B.Scaled(3.0, B.Ellipsoid((2.0, 1.0))), circle)
    e1, g1, r1 = F.stability_gap(f1)
    e2, g2, r2 = F.stability_gap(f2)
    npt.assert_allclose([e1, g1, r1], [e2, g2, r2], rtol=1e-8)


def test_functional_report_ball_margins(circle):
    report = F.functional_report(B.support_from_spec(B.Ball(1.0), circle))
    assert report.entropy == pytest.approx(0.0, abs=1e-12)
    for name, margin in report.margins().items():
        assert margin >= -1e-9, name


def test_functional_report_normalizes_input(circle):
    big = B.support_from_spec(B.Ball(5.0), circle)
    report = F.functional_report(big)
    assert report.entropy == pytest.approx(0.0, abs=1e-10)


def test_report_dict_roundtrippable(sphere):
    report = F.functional_report(
        B.support_from_spec(B.Ellipsoid((1.4, 1.0, 0.9)), sphere)
    )
    doc = report.to_dict()
    assert doc["n"] == 3
    assert all(np.isfinite(v) for v in report.margins().values())


@settings(max_examples=15, deadline=None)
@given(
    st.floats(min_value=-0.02, max_value=0.02),
    st.floats(min_value=-0.02, max_value=0.02),
)
def test_chain_holds_for_random_trig(a3, b5):
    g = build_grid(2, 128)
    spec = B.TrigPerturbation(1.0, ((3, a3, 0.0), (5, 0.0, b5)), 1.0)
    f = B.normalize(B.support_from_spec(spec, g))
    assert all(m >= -1e-9 for m in F.check_entropy_chain(f))


def test_entropy_gradient_finite_difference(circle, rng):
    # hygiene: analytic gradient of the entropy objective vs central differences
    f = norm_ellipse(circle)
    w, u = circle.weights, circle.nodes
    for _ in range(20):
        x = 0.3 * (rng.random(2) - 0.5)
        m = f.values - u @ x
        grad = -(w / m) @ u  # d/dx of int log(s - x.u)
        h = 1e-6
        fd = np.empty(2)
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = h
            fp = w @ np.log(f.values - u @ (x + dx))
            fm = w @ np.log(f.values - u @ (x - dx))
            fd[j] = (fp - fm) / (2 * h)
        npt.assert_allclose(grad, fd, rtol=1e-6)
