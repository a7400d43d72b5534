import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sint

from nanotube_spectra import _kernels_py, kernels
from nanotube_spectra.numerics import (
    NoConvergence,
    chebyshev_P,
    chebyshev_T,
    integrate,
    refine_extrema,
    symmetric_eigenvalues,
)


def test_smooth_integrals():
    assert integrate(lambda x: x * x, 0, 1).value == pytest.approx(1 / 3, abs=1e-14)
    assert integrate(np.cos, 0, math.pi).value == pytest.approx(0.0, abs=1e-14)


def test_endpoint_singularities():
    r = integrate(lambda x: 1 / np.sqrt(x), 0, 1, endpoint_flags=(True, False))
    assert r.value == pytest.approx(2.0, abs=1e-12)
    r = integrate(lambda x: 1 / np.sqrt(x * (1 - x)), 0, 1, endpoint_flags=(True, True))
    assert r.value == pytest.approx(math.pi, abs=1e-12)


def test_singular_integrand_is_never_evaluated_at_the_endpoint():
    # a width-one-ulp interval next to a singular endpoint
    lo = 1.0
    hi = math.nextafter(lo, 2.0)
    r = integrate(lambda x: 1 / np.sqrt(x - lo), lo, hi, endpoint_flags=(True, False))
    assert r.value <= 2 * math.sqrt(hi - lo) * 1.01


def test_against_scipy_quad():
    f = lambda x: np.exp(-x) * np.sin(5 * x) ** 2
    ref = sint.quad(f, 0, 4, epsabs=1e-13)[0]
    assert integrate(f, 0, 4, tol=1e-12).value == pytest.approx(ref, abs=1e-11)


def test_non_convergence_is_reported():
    with pytest.raises(NoConvergence) as e:
        integrate(lambda x: 1 / np.abs(x - 1 / math.pi) ** 0.9, 0, 1, tol=1e-14, max_intervals=50)
    assert e.value.best is not None


def test_refine_extrema():
    ext = refine_extrema(np.sin, 0, 10)
    assert [e.kind for e in ext] == ["max", "min", "max"]
    assert ext[0].x == pytest.approx(math.pi / 2, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 12), st.floats(-1, 1))
def test_chebyshev_against_trig(n, x):
    th = math.acos(x)
    assert chebyshev_T(n, x) == pytest.approx(math.cos(n * th), abs=1e-10)
    if abs(math.sin(th)) > 1e-3:
        assert chebyshev_P(n, x) == pytest.approx(math.sin((n + 1) * th) / math.sin(th), abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 7, 30])
def test_jacobi_against_numpy(n):
    rng = np.random.default_rng(n)
    a = rng.normal(size=(n, n))
    a = a + a.T
    sp = symmetric_eigenvalues(a, tol=1e-14)
    assert np.allclose(sp.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11)
    assert sp.residual < 1e-11


def test_jacobi_backends_agree():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(12, 12))
    a = a + a.T
    d1 = np.sort(kernels.jacobi_eigen(a, 1e-14, 50, False)[0])
    d2 = np.sort(_kernels_py.jacobi_eigen(a, 1e-14, 50, False)[0])
    assert np.allclose(d1, d2, atol=1e-12)


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        symmetric_eigenvalues([[0.0, 1.0], [0.0, 0.0]])
