import math

import numpy as np
import pytest
from scipy import special

from nanotube_spectra.mgf import (
    alpha_beta,
    angular_i0,
    bessel_i0,
    bessel_in,
    bessel_j0,
    i0hat,
    mgf,
    mgf_excess,
    mgf_limit,
    mgf_series,
    mgf_to_csv,
    series_terms_needed,
    verify_integral_identity,
)
from nanotube_spectra.moments import moments_oracle, triangular_moments


def test_i0_against_scipy():
    x = np.concatenate([np.linspace(0, 30, 301), np.linspace(30, 700, 200)])
    assert np.max(np.abs(bessel_i0(x) / special.i0(x) - 1)) < 1e-13


def test_j0_against_scipy():
    x = np.linspace(0, 200, 4001)
    assert np.max(np.abs(bessel_j0(x) - special.j0(x))) < 1e-13


@pytest.mark.parametrize("n", [1, 5, 12, 40, 100])
def test_in_against_scipy(n):
    x = np.array([0.1, 1.0, 2.0, 7.5, 20.0])
    assert np.allclose(bessel_in(n, x), special.iv(n, x), rtol=1e-12, atol=0)


def test_i0hat_aliasing_series():
    a, b = 1.3, -0.7
    r, phi = math.hypot(a, b), math.atan2(b, a)
    gaps = []
    for n in (3, 5, 8, 12):
        alias = 2 * sum(float(bessel_in(m * n, r)) * math.cos(m * n * phi) for m in range(1, 12))
        gap = i0hat(a, b, n, 0) - float(bessel_i0(r))
        assert gap == pytest.approx(alias, rel=1e-6, abs=1e-15)
        gaps.append(abs(gap))
    assert all(x > y for x, y in zip(gaps, gaps[1:]))


def test_angular_integral():
    for a, b in [(0.0, 0.0), (2.0, 1.0), (-3.0, 4.0)]:
        assert angular_i0(a, b).value == pytest.approx(float(bessel_i0(math.hypot(a, b))), rel=1e-12)


def test_alpha_beta_on_the_circle():
    th = np.linspace(0, math.pi, 9)
    a, b = alpha_beta((5, 1), th)
    assert np.allclose(np.hypot(a, b), np.abs(np.cos(th / 2)))


@pytest.mark.parametrize("pq", [(5, 0), (5, 1), (5, 5), (4, 3)])
@pytest.mark.parametrize("t", [-0.3, -0.1, 0.1, 0.3])
def test_mgf_against_moment_series(pq, t):
    k = series_terms_needed(t, tail=1e-12)
    mu = [moments_oracle(pq, j) for j in range(k + 1)]
    assert mgf(pq, t, tol=1e-12).value == pytest.approx(mgf_series(mu, t), abs=1e-10)


def test_mgf_at_zero_and_limit():
    assert mgf((5, 0), 0.0).value == 1.0
    t = 0.2
    k = series_terms_needed(t, tail=1e-13)
    assert mgf_limit(t).value == pytest.approx(mgf_series([triangular_moments(j) for j in range(k + 1)], t), abs=1e-10)


def test_excess_against_direct_difference():
    for pq in [(5, 0), (5, 5), (6, 1)]:
        for t in (0.5, -0.5, 1.0):
            e = mgf_excess(pq, t).value
            d = mgf(pq, t, tol=1e-13).value - mgf_limit(t, tol=1e-13).value
            assert e == pytest.approx(d, abs=1e-11)


def test_excess_against_exact_series_p10():
    # the first N moments coincide with the limit, so the series starts at k = N
    t = 0.5
    total = 0.0
    for k in range(20, 60):
        total += (moments_oracle((10, 10), k) - triangular_moments(k)) * t ** k / math.factorial(k)
    assert mgf_excess((10, 10), t).value == pytest.approx(total, rel=1e-8)


@pytest.mark.parametrize("t", [-0.5, 0.0, 0.1, 0.5])
def test_integral_identity(t):
    lhs, rhs, gap = verify_integral_identity(t)
    assert gap < 1e-9


def test_series_terms_needed():
    assert series_terms_needed(0.1) == 12
    assert series_terms_needed(0.3) == 20


def test_csv():
    text = mgf_to_csv([(0.0, 1.0, 0.0)])
    assert text.splitlines() == ["t,m,err", "0.0,1.0,0.0"]


def test_rejects_non_finite_t():
    with pytest.raises(ValueError):
        mgf((5, 0), float("nan"))
