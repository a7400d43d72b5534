"""Acceptance suite: one printed pass/fail line per criterion.

``NANOTUBE_SPECTRA_SUITE=quick`` skips the ten-million-sample comparison in
criterion 9 (its exact-CDF counterpart still runs).
"""

import os

import pytest

from nanotube_spectra.verification import CRITERIA, DEFAULT_SEED, run_criterion

SUITE = os.environ.get("NANOTUBE_SPECTRA_SUITE", "full")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = run_criterion(number, SUITE, DEFAULT_SEED)
    with capsys.disabled():
        print()
        print(res.line())
        for d in res.details:
            print("    " + d)
    assert res.passed, "\n".join(res.details)
