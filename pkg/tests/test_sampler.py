import math

import numpy as np
import pytest
from scipy import stats

from nanotube_spectra.moments import moments_oracle, triangular_moments
from nanotube_spectra.sampler import (
    SeededStream,
    histogram_to_csv,
    ks_two_sample,
    moment_zscores,
    sample_armchair,
    sample_general,
    sample_triangular_limit,
    sample_zigzag,
    samples_to_csv,
    sup_cdf_distance,
    theorem1_map,
    zigzag_map,
    armchair_map,
)

N = 200_000


def test_determinism_and_counter_skip():
    a = SeededStream(5).uniform(10)
    b = SeededStream(5).uniform(10)
    assert a.tobytes() == b.tobytes()
    s = SeededStream(5, counter=4)
    assert s.uniform(6).tobytes() == a[4:].tobytes()
    assert not np.array_equal(SeededStream(5).spawn(1).uniform(10), a)


def test_angle_is_half_open():
    u = SeededStream(1).angle(100000)
    assert u.min() > 0 and u.max() <= math.pi


def test_seed_range():
    with pytest.raises(ValueError):
        SeededStream(-1)


@pytest.mark.parametrize("p,j", [(5, 0), (5, 2), (6, 3), (7, 4)])
def test_zigzag_map_is_the_general_map(p, j):
    u = np.linspace(0.01, math.pi, 101)
    assert np.allclose(zigzag_map(p, np.cos(u / 2), j), theorem1_map(p, 0, u, j), atol=1e-12)


@pytest.mark.parametrize("p,j", [(5, 0), (5, 3), (4, 2)])
def test_armchair_map_is_the_general_map(p, j):
    u = np.linspace(0.01, math.pi, 101)
    assert np.allclose(armchair_map(p, np.cos(u / 2), j), theorem1_map(p, p, u, j), atol=1e-12)


@pytest.mark.parametrize("pq", [(5, 0), (5, 1), (5, 5), (7, 3)])
def test_general_sampler_moments(pq):
    x = sample_general(pq, SeededStream(3), N)
    exact = [moments_oracle(pq, k) for k in range(7)]
    assert max(abs(z) for z in moment_zscores(x, exact, 6)) < 4.5
    assert x.min() >= 0 and x.max() <= 9


def test_specialised_samplers_match_general():
    for draw_a, draw_b in [
        (lambda s: sample_zigzag(6, s, N), lambda s: sample_general((6, 0), s, N)),
        (lambda s: sample_armchair(4, s, N), lambda s: sample_general((4, 4), s, N)),
    ]:
        # the general map reaches the p=6 atom at 1 only up to roundoff
        a = np.round(draw_a(SeededStream(10)), 12)
        b = np.round(draw_b(SeededStream(11)), 12)
        assert ks_two_sample(a, b) < 1.63 * math.sqrt(2 / N) * 1.5


def test_limit_sampler_moments():
    x = sample_triangular_limit(0.5, SeededStream(4), N)
    exact = [triangular_moments(k) for k in range(7)]
    assert max(abs(z) for z in moment_zscores(x, exact, 6)) < 4.5


def test_ks_statistics_against_scipy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=3000)
    y = rng.normal(0.1, 1.0, size=2000)
    assert ks_two_sample(x, y) == pytest.approx(stats.ks_2samp(x, y).statistic, abs=1e-12)
    assert sup_cdf_distance(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-12)


def test_sup_distance_handles_atoms():
    x = np.array([0.0, 1.0, 1.0, 2.0])
    cdf = lambda t: np.where(t < 1.0, 0.25, np.where(t < 2.0, 0.75, 1.0)) * (t >= 0)
    assert sup_cdf_distance(x, cdf) == pytest.approx(0.0, abs=1e-12)


def test_csv_writers():
    x = sample_general((5, 0), SeededStream(1), 50)
    s = samples_to_csv(x)
    assert s.splitlines()[0] == "lambda" and len(s.splitlines()) == 51
    h = histogram_to_csv(x, bins=9).splitlines()
    assert h[0] == "bin_left,bin_right,count"
    assert sum(int(r.split(",")[2]) for r in h[1:]) == 50
