import os
import subprocess
import sys

import numpy as np
import numpy.testing as npt
import pytest

from gcflow import _kernels_py, kernels

cy = pytest.importorskip("gcflow._kernels_cy")


@pytest.fixture
def fields(rng):
    s = 1.0 + 0.1 * rng.standard_normal(400)
    s_tt = 0.1 * rng.standard_normal(400)
    h11 = 1.0 + 0.05 * rng.standard_normal(400)
    h12 = 0.05 * rng.standard_normal(400)
    h22 = 1.0 + 0.05 * rng.standard_normal(400)
    return s, s_tt, h11, h12, h22


def test_backend_is_compiled_by_default():
    assert kernels.BACKEND in ("cython", "python")
    if "GCFLOW_PURE_PYTHON" not in os.environ:
        assert kernels.BACKEND == "cython"


def test_curvature_2d_parity(fields):
    s, s_tt, *_ = fields
    npt.assert_allclose(cy.curvature_2d(s, s_tt), _kernels_py.curvature_2d(s, s_tt), rtol=1e-15)


def test_curvature_3d_parity(fields):
    s, _, h11, h12, h22 = fields
    out_cy = cy.curvature_3d(s, h11, h12, h22)
    out_py = _kernels_py.curvature_3d(s, h11, h12, h22)
    for a, b in zip(out_cy, out_py):
        npt.assert_allclose(a, b, rtol=1e-13, atol=1e-15)


def test_shrink_step_parity(fields):
    s, _, _, _, _ = fields
    sig = s + 0.3
    npt.assert_allclose(
        cy.shrink_step(s, sig, 1e-5), _kernels_py.shrink_step(s, sig, 1e-5), rtol=1e-15
    )


def test_curvature_3d_eigenvalues(fields):
    # lam_min/lam_max are the eigenvalues of [[s+h11, h12], [h12, s+h22]]
    s, _, h11, h12, h22 = fields
    sig, lam_min, lam_max = _kernels_py.curvature_3d(s, h11, h12, h22)
    A = np.empty((s.size, 2, 2))
    A[:, 0, 0] = s + h11
    A[:, 0, 1] = A[:, 1, 0] = h12
    A[:, 1, 1] = s + h22
    eig = np.linalg.eigvalsh(A)
    npt.assert_allclose(lam_min, eig[:, 0], atol=1e-12)
    npt.assert_allclose(lam_max, eig[:, 1], atol=1e-12)
    npt.assert_allclose(sig, eig[:, 0] * eig[:, 1], atol=1e-12)


def test_pure_python_env_override():
    code = (
        "import os; os.environ['GCFLOW_PURE_PYTHON'] = '1'; "
        "from gcflow import kernels; print(kernels.BACKEND)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "python"
