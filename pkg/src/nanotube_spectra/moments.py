"""Exact moments of the random eigenvalue of a dual infinite nanotube.

Three independent closed forms are provided next to the triangular-lattice
limit; all arithmetic is on Python integers (exact rationals where a formula
needs division).  ``moment_table`` runs several of them and insists that they
agree.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import kernels
from .lattice import TRIANGULAR, QuotientLattice, as_chiral, closed_walk_count

__all__ = [
    "METHODS",
    "MomentSequence",
    "MomentMismatch",
    "moments_indicator_sum",
    "moments_binomial_ratio",
    "moments_seven_multinomial",
    "moments_oracle",
    "triangular_moments",
    "moment_table",
    "moments_to_csv",
]

METHODS = ("indicator", "binomial_ratio", "seven_multinomial", "oracle")


class MomentMismatch(ArithmeticError):
    """Two moment formulas disagree; carries ``(k, (method_a, a), (method_b, b))``."""

    def __init__(self, k: int, a: tuple[str, int], b: tuple[str, int]):
        super().__init__(f"k={k}: {a[0]}={a[1]} but {b[0]}={b[1]}")
        self.k = k
        self.a = a
        self.b = b


@dataclass(frozen=True)
class MomentSequence:
    chiral: object  # ChiralVector or TRIANGULAR
    values: tuple[int, ...]
    method: str

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


@lru_cache(maxsize=None)
def _factorials(n: int) -> tuple[int, ...]:
    out = [1]
    for i in range(1, n + 1):
        out.append(out[-1] * i)
    return tuple(out)


def _fact(k: int) -> tuple[int, ...]:
    # one shared table, grown in chunks
    return _factorials(max(64, 1 << (7 * k).bit_length()))


def _compositions3(k: int):
    # lexicographic order
    for k1 in range(k + 1):
        for k2 in range(k - k1 + 1):
            yield k1, k2, k - k1 - k2


def _binom(n: int, r: int) -> int:
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def _pq(chiral) -> tuple[int, int]:
    if isinstance(chiral, tuple):
        p, q = int(chiral[0]), int(chiral[1])
        if p < 0 or q < 0 or p + q < 1:
            raise ValueError(f"invalid chiral vector {chiral}")
        return p, q
    ch = as_chiral(chiral)
    return ch.p, ch.q


def _check_k(k: int) -> None:
    if k < 0:
        raise ValueError("k must be non-negative")


def triangular_moments(k: int) -> int:
    """Sum of squared trinomial coefficients over compositions of ``k``."""
    _check_k(k)
    f = _fact(k)
    total = 0
    for k1, k2, k3 in _compositions3(k):
        m = f[k] // (f[k1] * f[k2] * f[k3])
        total += m * m
    return total


def moments_indicator_sum(chiral, k: int) -> int:
    """Double composition sum with the shift indicator.

    For each composition ``(k1, k2, k3)`` and each integer ``j`` the partner
    composition is forced to ``(k1 + j p, k2 + j q, k3 - j (p+q))``; only
    ``|j| <= k // (p+q)`` can keep all parts non-negative.
    ``chiral`` may be a raw tuple to keep the given orientation.
    """
    _check_k(k)
    p, q = _pq(chiral)
    n = p + q
    f = _fact(k)
    jmax = k // n
    total = 0
    for k1, k2, k3 in _compositions3(k):
        m = f[k] // (f[k1] * f[k2] * f[k3])
        partner = 0
        for j in range(-jmax, jmax + 1):
            a, b, c = k1 + j * p, k2 + j * q, k3 - j * n
            if a < 0 or b < 0 or c < 0:
                continue
            partner += f[k] // (f[a] * f[b] * f[c])
        total += m * partner
    return total


def moments_binomial_ratio(chiral, k: int) -> int:
    """Squared multinomials times a binomial-ratio correction.

    The correction terms are exact rationals; a non-integral total means a
    bug and raises ``ArithmeticError``.
    """
    _check_k(k)
    p, q = _pq(chiral)
    n = p + q
    f = _fact(k)
    total = Fraction(0)
    for k1, k2, k3 in _compositions3(k):
        m = f[k] // (f[k1] * f[k2] * f[k3])
        corr = Fraction(0)
        lmax = k1 // n
        if lmax:
            den = _binom(k, k1) * _binom(2 * (k - k1), k - k1)
            num = 0
            for l in range(1, lmax + 1):
                num += _binom(2 * k1 - l * q, k1 + l * p) * _binom(k, k1 - l * q)
            corr = Fraction(2 * num, den)
        total += m * m * (1 + corr)
    if total.denominator != 1:
        raise ArithmeticError(f"binomial-ratio moment is non-integral: {total}")
    return int(total)


def moments_seven_multinomial(chiral, k: int) -> int:
    """Seven-part multinomial sum with the congruence and linear constraints.

    The congruence is modulo ``p``, so a raw ``(0, q)`` is read as ``(q, 0)``.
    """
    _check_k(k)
    p, q = _pq(chiral)
    if p == 0:
        p, q = q, p
    return int(kernels.seven_multinomial_sum(p, q, k))


def moments_oracle(chiral, k: int) -> int:
    """Walk count on the quotient lattice (the ground truth)."""
    _check_k(k)
    if chiral is TRIANGULAR:
        return closed_walk_count(TRIANGULAR, k)
    p, q = _pq(chiral)
    return closed_walk_count(QuotientLattice.raw(p, q), k)


_DISPATCH = {
    "indicator": moments_indicator_sum,
    "binomial_ratio": moments_binomial_ratio,
    "seven_multinomial": moments_seven_multinomial,
    "oracle": moments_oracle,
}


def _oracle_sequence(chiral, k_max: int) -> list[int]:
    # one DP pass gives every k; closed_walk_count restarts per k, so redo it here
    from collections import defaultdict

    lat = QuotientLattice.triangular() if chiral is TRIANGULAR else QuotientLattice.raw(*_pq(chiral))
    w = int(lat.loop_weight)
    counts = {(0, 0): 1}
    out = [1]
    for _ in range(k_max):
        nxt = defaultdict(int)
        for (a, b), c in counts.items():
            nxt[(a, b)] += w * c
            for da, db in lat.steps:
                nxt[lat.canonical(a + da, b + db)] += c
        counts = nxt
        out.append(counts.get((0, 0), 0))
    return out


def moment_table(chiral, k_max: int, methods: Iterable[str] | str = "all") -> list[MomentSequence]:
    """Run ``methods`` for ``k = 0..k_max`` and check that they all agree.

    ``chiral`` may be ``TRIANGULAR``, in which case the direct sum and the
    oracle are compared.  Raises :class:`MomentMismatch` on disagreement.
    """
    _check_k(k_max)
    if chiral is TRIANGULAR or chiral == "triangular":
        chiral = TRIANGULAR
        names = ["triangular_sum", "oracle"] if methods == "all" else list(methods)
    else:
        if not isinstance(chiral, tuple):
            chiral = as_chiral(chiral)
        names = list(METHODS) if methods == "all" else list(methods)
    if not names:
        raise ValueError("no methods requested")
    seqs = []
    for name in names:
        if name == "oracle":
            vals = _oracle_sequence(chiral, k_max)
        elif name == "triangular_sum" or chiral is TRIANGULAR:
            if name not in ("triangular_sum", "binomial_ratio", "indicator", "seven_multinomial"):
                raise ValueError(f"unknown method {name!r}")
            vals = [triangular_moments(k) for k in range(k_max + 1)]
        elif name in _DISPATCH:
            vals = [_DISPATCH[name](chiral, k) for k in range(k_max + 1)]
        else:
            raise ValueError(f"unknown method {name!r}")
        seqs.append(MomentSequence(chiral, vals, name))
    ref = seqs[0]
    for other in seqs[1:]:
        for k in range(k_max + 1):
            if ref.values[k] != other.values[k]:
                raise MomentMismatch(k, (ref.method, ref.values[k]), (other.method, other.values[k]))
    return seqs


def moments_to_csv(seqs: Sequence[MomentSequence], stream=None) -> str:
    """CSV with columns ``k,method,value`` (values in decimal)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "method", "value"])
    for s in seqs:
        for k, v in enumerate(s.values):
            w.writerow([k, s.method, str(v)])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
