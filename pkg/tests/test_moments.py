import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nanotube_spectra import kernels
from nanotube_spectra._kernels_py import seven_multinomial_sum as seven_py
from nanotube_spectra.lattice import TRIANGULAR
from nanotube_spectra.moments import (
    MomentMismatch,
    moment_table,
    moments_binomial_ratio,
    moments_indicator_sum,
    moments_oracle,
    moments_seven_multinomial,
    moments_to_csv,
    triangular_moments,
)
import nanotube_spectra.moments as moments_mod


def test_known_values():
    assert moments_oracle((5, 0), 5) == 4655
    assert moments_oracle((5, 1), 6) == 35181
    assert [triangular_moments(k) for k in range(7)] == [1, 3, 15, 93, 639, 4653, 35169]


def test_triangular_by_brute_force_trinomials():
    for k in range(10):
        direct = sum(
            (math.factorial(k) // (math.factorial(a) * math.factorial(b) * math.factorial(k - a - b))) ** 2
            for a in range(k + 1) for b in range(k + 1 - a)
        )
        assert triangular_moments(k) == direct


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 11))
def test_all_formulas_agree(p, q, k):
    if p + q < 3:
        return
    ref = moments_oracle((p, q), k)
    assert moments_indicator_sum((p, q), k) == ref
    assert moments_binomial_ratio((p, q), k) == ref
    assert moments_seven_multinomial((p, q), k) == ref


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.integers(0, 9), st.integers(0, 14))
def test_stabilisation(p, q, k):
    if p + q <= k:
        assert moments_oracle((p, q), k) >= triangular_moments(k)
    else:
        assert moments_oracle((p, q), k) == triangular_moments(k)


def test_seven_multinomial_backends_agree():
    for p, q, k in [(5, 0, 5), (5, 1, 6), (3, 0, 4), (7, 3, 8), (6, 2, 12), (9, 1, 14)]:
        assert kernels.seven_multinomial_sum(p, q, k) == seven_py(p, q, k)


def test_large_k_uses_exact_python_path():
    # beyond the uint64 range of the compiled kernel
    assert moments_seven_multinomial((5, 0), 22) == moments_oracle((5, 0), 22)


def test_moment_table_and_csv():
    seqs = moment_table((5, 1), 8)
    assert [s.method for s in seqs] == ["indicator", "binomial_ratio", "seven_multinomial", "oracle"]
    text = moments_to_csv(seqs)
    assert text.splitlines()[0] == "k,method,value"
    assert "6,oracle,35181" in text
    tri = moment_table(TRIANGULAR, 6)
    assert tri[0].values == tri[1].values


def test_mismatch_is_reported(monkeypatch):
    monkeypatch.setitem(moments_mod._DISPATCH, "indicator", lambda ch, k: 7 if k == 3 else moments_oracle(ch, k))
    with pytest.raises(MomentMismatch) as e:
        moment_table((5, 0), 5, ["indicator", "oracle"])
    assert e.value.k == 3


def test_invalid_input():
    with pytest.raises(ValueError):
        moments_indicator_sum((5, 0), -1)
    with pytest.raises(ValueError):
        moment_table((5, 0), 3, ["nope"])
