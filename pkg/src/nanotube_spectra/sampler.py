"""Monte Carlo samplers for the random eigenvalue and its triangular limit.

Every sampler takes a :class:`SeededStream`; equal seeds give bit-identical
samples.  The angle ``U`` is drawn on the half-open interval ``(0, pi]``.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

import numpy as np

from .lattice import as_chiral

__all__ = [
    "SeededStream",
    "theorem1_map",
    "zigzag_map",
    "armchair_map",
    "limit_map",
    "sample_general",
    "sample_zigzag",
    "sample_armchair",
    "sample_triangular_limit",
    "ecdf_distance",
    "ks_two_sample",
    "sup_cdf_distance",
    "moment_zscores",
    "histogram",
    "samples_to_csv",
    "histogram_to_csv",
]


class SeededStream:
    """Seeded, splittable source of uniforms (Philox counter-based generator).

    ``counter`` is the number of 64-bit draws consumed so far; building a
    stream with a non-zero counter skips that many draws.  ``spawn(i)`` gives
    an independent substream.
    """

    def __init__(self, seed: int, counter: int = 0, key: tuple[int, ...] = ()):
        if seed < 0 or seed >= 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        self.counter = 0
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(ss))
        if counter:
            self._gen.integers(0, 2 ** 63, size=int(counter))
            self.counter = int(counter)

    def __repr__(self):
        return f"SeededStream(seed={self.seed}, counter={self.counter}, key={self.key})"

    def spawn(self, i: int) -> "SeededStream":
        return SeededStream(self.seed, 0, self.key + (int(i),))

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in ``[0, 1)``."""
        out = self._gen.random(int(n))
        self.counter += int(n)
        return out

    def integers(self, high: int, n: int) -> np.ndarray:
        """``n`` integers uniform on ``{0, ..., high-1}``."""
        out = self._gen.integers(0, int(high), size=int(n))
        self.counter += int(n)
        return out

    def angle(self, n: int, top: float = math.pi) -> np.ndarray:
        """Uniform on ``(0, top]``."""
        return top * (1.0 - self.uniform(n))


def _as_stream(stream) -> SeededStream:
    if isinstance(stream, SeededStream):
        return stream
    return SeededStream(int(stream))


def theorem1_map(p: int, q: int, u, j):
    """``3 + 2(cos u + cos((p u + 2 pi j)/N) + cos((q u - 2 pi j)/N))``, ``N = p+q``."""
    n = p + q
    u = np.asarray(u, dtype=float)
    j = np.asarray(j, dtype=float)
    return 3.0 + 2.0 * (np.cos(u) + np.cos((p * u + 2 * np.pi * j) / n) + np.cos((q * u - 2 * np.pi * j) / n))


def zigzag_map(p: int, v, j):
    c = np.cos(2 * np.pi * np.asarray(j, dtype=float) / p)
    s = np.sin(2 * np.pi * np.asarray(j, dtype=float) / p)
    v = np.asarray(v, dtype=float)
    return 4 * (1 + c) * v * v - 4 * s * v * np.sqrt(np.clip(1 - v * v, 0.0, None)) + 1


def armchair_map(p: int, v, j):
    v = np.asarray(v, dtype=float)
    a = np.cos(np.pi * np.asarray(j, dtype=float) / p)
    return 4 * v * v + 4 * a * v + 1


def limit_map(c: float, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return 3.0 + 2.0 * (np.cos(u) + np.cos((1 - c) * u + v) + np.cos(c * u - v))


def _clip09(x: np.ndarray) -> np.ndarray:
    # roundoff can leave values a few ulps outside the exact support
    return np.clip(x, 0.0, 9.0)


def sample_general(chiral, stream, n: int, u=None, j=None) -> np.ndarray:
    """``n`` samples of the two-variable cosine representation.

    ``u`` or ``j`` may be given to force the corresponding variable.
    """
    ch = as_chiral(chiral)
    if n < 0:
        raise ValueError("n must be non-negative")
    st = _as_stream(stream)
    uu = st.angle(n) if u is None else np.broadcast_to(np.asarray(u, dtype=float), (n,))
    jj = st.integers(ch.circumference, n) if j is None else np.broadcast_to(np.asarray(j), (n,))
    return _clip09(theorem1_map(ch.p, ch.q, uu, jj))


def sample_zigzag(p: int, stream, n: int, j=None) -> np.ndarray:
    """Samples of the ``(p, 0)`` law through ``V = cos(U/2)``."""
    if p < 3:
        raise ValueError("zigzag sampler needs p >= 3")
    if n < 0:
        raise ValueError("n must be non-negative")
    st = _as_stream(stream)
    v = np.cos(0.5 * st.angle(n))
    jj = st.integers(p, n) if j is None else np.broadcast_to(np.asarray(j), (n,))
    return _clip09(zigzag_map(p, v, jj))


def sample_armchair(p: int, stream, n: int, j=None) -> np.ndarray:
    """Samples of the ``(p, p)`` law: ``4V^2 + 4 cos(pi J / p) V + 1``."""
    if p < 2:
        raise ValueError("armchair sampler needs p >= 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    st = _as_stream(stream)
    v = np.cos(0.5 * st.angle(n))
    jj = st.integers(2 * p, n) if j is None else np.broadcast_to(np.asarray(j), (n,))
    return _clip09(armchair_map(p, v, jj))


def sample_triangular_limit(c: float, stream, n: int) -> np.ndarray:
    """Samples of the limit law with ``U, V`` uniform on ``(0, 2 pi]``."""
    if not 0.0 <= c <= 1.0:
        raise ValueError("c must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    st = _as_stream(stream)
    u = st.angle(n, 2 * math.pi)
    v = st.angle(n, 2 * math.pi)
    return _clip09(limit_map(c, u, v))


def ks_two_sample(x, y) -> float:
    """Sup distance between the empirical CDFs of two samples."""
    xs = np.sort(np.asarray(x, dtype=float))
    ys = np.sort(np.asarray(y, dtype=float))
    if xs.size == 0 or ys.size == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([xs, ys])
    fx = np.searchsorted(xs, grid, side="right") / xs.size
    fy = np.searchsorted(ys, grid, side="right") / ys.size
    return float(np.max(np.abs(fx - fy)))


ecdf_distance = ks_two_sample


def sup_cdf_distance(sample, cdf) -> float:
    """Kolmogorov distance between a sample and a vectorised CDF.

    Both one-sided gaps at every jump are checked, so atoms in ``cdf`` are
    handled as long as ``cdf`` is right-continuous.
    """
    xs = np.sort(np.asarray(sample, dtype=float))
    n = xs.size
    if n == 0:
        raise ValueError("empty sample")
    ux, first = np.unique(xs, return_index=True)
    last = np.append(first[1:], n)
    f = np.asarray(cdf(ux), dtype=float)
    # F(x-) only matters at atoms of the reference law; use a tiny left shift
    fl = np.asarray(cdf(ux - 1e-12 * np.maximum(1.0, np.abs(ux))), dtype=float)
    d_plus = np.max(last / n - f)
    d_minus = np.max(fl - first / n)
    return float(max(d_plus, d_minus, 0.0))


def moment_zscores(sample, exact: Sequence[int], k_max: int) -> list[float]:
    """``(mean(x^k) - mu_k) / SE`` for ``k = 1..k_max``; ``SE = std(x^k)/sqrt(n)``."""
    x = np.asarray(sample, dtype=float)
    n = x.size
    out = []
    xk = np.ones_like(x)
    for k in range(1, k_max + 1):
        xk = xk * x
        m = float(np.mean(xk))
        se = float(np.std(xk, ddof=1)) / math.sqrt(n)
        out.append((m - float(exact[k])) / se if se > 0 else (0.0 if m == exact[k] else math.inf))
    return out


def histogram(sample, bins: int = 90, lo: float = 0.0, hi: float = 9.0):
    counts, edges = np.histogram(np.asarray(sample, dtype=float), bins=bins, range=(lo, hi))
    return edges[:-1], edges[1:], counts


def samples_to_csv(sample, stream=None) -> str:
    buf = io.StringIO()
    buf.write("lambda\n")
    for v in np.asarray(sample, dtype=float):
        buf.write(f"{v!r}\n")
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def histogram_to_csv(sample, bins: int = 90, stream=None) -> str:
    left, right, counts = histogram(sample, bins)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin_left", "bin_right", "count"])
    for a, b, c in zip(left, right, counts):
        w.writerow([repr(float(a)), repr(float(b)), int(c)])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
