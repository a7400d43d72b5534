"""Moment generating functions and the Bessel functions they need.

The MGF of the random eigenvalue is a one-dimensional integral over the angle
``theta`` whose integrand contains ``I0hat``, an equispaced average of
exponentials (a discretised form of the angular integral for ``I0``).  As the
circumference grows ``I0hat`` tends to ``I0`` and the MGF tends to that of the
triangular lattice.

Note on the zigzag/armchair specialisations: they follow from the general
formula by substituting ``alpha, beta``; the arguments of ``I0hat`` keep the
factor ``4t`` (the moment series confirms this), so no separate code path is
needed.
"""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .lattice import as_chiral
from .numerics import NoConvergence, QuadratureResult, integrate

__all__ = [
    "bessel_i0",
    "bessel_j0",
    "bessel_in",
    "i0hat",
    "alpha_beta",
    "mgf",
    "mgf_limit",
    "mgf_excess",
    "mgf_series",
    "verify_integral_identity",
    "angular_i0",
    "mgf_to_csv",
]

_EPS = 1e-17


# ---------------------------------------------------------------- Bessel

def _i0_series(x: np.ndarray) -> np.ndarray:
    y = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    k = 1
    while True:
        term = term * y / (k * k)
        total = total + term
        if np.all(term <= _EPS * total) or k > 500:
            break
        k += 1
    return total


def _i0_asymptotic(x: np.ndarray) -> np.ndarray:
    # e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    ax = np.abs(x)
    term = np.ones_like(ax)
    total = np.ones_like(ax)
    for k in range(1, 60):
        term = term * (2 * k - 1) ** 2 / (k * 8.0 * ax)
        total = total + term
        if np.all(term < _EPS * total):
            break
    return np.exp(ax) / np.sqrt(2 * np.pi * ax) * total


def bessel_i0(x):
    """Modified Bessel function ``I0``: power series up to 30, Hankel beyond."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax <= 30.0
    if np.any(small):
        out[small] = _i0_series(ax[small])
    if np.any(~small):
        out[~small] = _i0_asymptotic(ax[~small])
    return out if out.ndim else float(out)


def _j0_series(x: np.ndarray) -> np.ndarray:
    y = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 80):
        term = term * y / (k * k)
        total = total + term
        if np.all(np.abs(term) < 1e-18):
            break
    return total


def _j0_miller(x: np.ndarray) -> np.ndarray:
    # backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1}, normalised by
    # J_0 + 2 sum J_{2k} = 1
    xm = float(np.max(x))
    start = int(xm + 25 + 10 * math.sqrt(xm))
    start += start % 2
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-300)
    norm = np.zeros_like(x)
    for n in range(start, 0, -1):
        jm1 = (2.0 * n / x) * j - jp1
        jp1, j = j, jm1
        big = np.abs(j) > 1e250
        if np.any(big):
            sc = np.where(big, 1e-250, 1.0)
            jp1, j, norm = jp1 * sc, j * sc, norm * sc
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm = norm + 2.0 * j
    norm = norm + j
    return j / norm


def _j0_asymptotic(x: np.ndarray) -> np.ndarray:
    # Hankel expansion J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4
    mu = 0.0
    p = np.ones_like(x)
    qq = np.zeros_like(x)
    term = np.ones_like(x)
    z = 8.0 * x
    for k in range(1, 40):
        term = term * (mu - (2 * k - 1) ** 2) / (k * z)
        if k % 2 == 1:
            qq = qq + term * (1 if (k // 2) % 2 == 0 else -1)
        else:
            p = p + term * (1 if (k // 2) % 2 == 0 else -1)
        if np.all(np.abs(term) < 1e-17):
            break
    chi = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - qq * np.sin(chi))


def bessel_j0(x):
    """Bessel function ``J0``: series up to 8, Miller recurrence to 40, Hankel beyond."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    a = x <= 8.0
    b = (x > 8.0) & (x <= 40.0)
    c = x > 40.0
    if np.any(a):
        out[a] = _j0_series(x[a])
    if np.any(b):
        out[b] = _j0_miller(x[b])
    if np.any(c):
        out[c] = _j0_asymptotic(x[c])
    return out if out.ndim else float(out)


def bessel_in(n: int, x):
    """``I_n(x)`` for integer ``n`` by its power series, scaled to avoid overflow.

    Intended for moderate ``|x|`` (the MGF needs ``|x| <= 4|t|``); tiny values
    such as ``I_100(2) ~ 1e-158`` are returned without underflow to zero.
    """
    n = abs(int(n))
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    y = 0.25 * ax * ax
    term = np.ones_like(ax)
    total = np.ones_like(ax)
    for k in range(1, 1000):
        term = term * y / (k * (k + n))
        total = total + term
        if np.all(term <= _EPS * total):
            break
    with np.errstate(divide="ignore"):
        logpre = n * np.log(0.5 * ax) - math.lgamma(n + 1)
    pre = np.where(ax > 0, np.exp(logpre), 1.0 if n == 0 else 0.0)
    out = pre * total
    if n % 2:
        out = np.where(x < 0, -out, out)
    return out if out.ndim else float(out)


def angular_i0(alpha: float, beta: float, tol: float = 1e-12) -> QuadratureResult:
    """``(1/2pi) int_0^{2pi} exp(alpha cos phi + beta sin phi) dphi`` by quadrature."""
    r = integrate(lambda ph: np.exp(alpha * np.cos(ph) + beta * np.sin(ph)),
                  0.0, 2 * math.pi, tol=tol)
    s = 1.0 / (2 * math.pi)
    return QuadratureResult(r.value * s, r.error_estimate * s, r.evaluations)


# ---------------------------------------------------------------- MGF

def i0hat(alpha, beta, p: int, q: int):
    """Equispaced average of ``exp(alpha cos(2 pi j/N) + beta sin(2 pi j/N))``, ``N = p+q``."""
    n = int(p) + int(q)
    if n < 1:
        raise ValueError("p + q must be at least 1")
    ang = 2 * np.pi * np.arange(n) / n
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    e = a[..., None] * np.cos(ang) + b[..., None] * np.sin(ang)
    # factor the largest exponent out so large arguments do not overflow early
    m = np.max(e, axis=-1, keepdims=True)
    out = np.exp(m[..., 0]) * np.mean(np.exp(e - m), axis=-1)
    return out if out.ndim else float(out)


def alpha_beta(chiral, theta):
    """``(cos(t/2) cos(t(p-q)/(2N)), cos(t/2) sin(t(p-q)/(2N)))``."""
    ch = as_chiral(chiral)
    th = np.asarray(theta, dtype=float)
    c = np.cos(0.5 * th)
    phi = th * (ch.p - ch.q) / (2.0 * ch.circumference)
    a, b = c * np.cos(phi), c * np.sin(phi)
    if a.ndim == 0:
        return float(a), float(b)
    return a, b


def _check_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    return t


def mgf(chiral, t: float, tol: float = 1e-10) -> QuadratureResult:
    """``E exp(t Lambda)`` from the one-dimensional angular integral."""
    ch = as_chiral(chiral)
    t = _check_t(t)
    if t == 0.0:
        return QuadratureResult(1.0, 0.0, 0)

    def f(th):
        a, b = alpha_beta(ch, th)
        return np.exp(3 * t + 2 * t * np.cos(th)) * i0hat(4 * t * a, 4 * t * b, ch.p, ch.q)

    r = integrate(f, 0.0, math.pi, tol=tol * math.pi)
    return QuadratureResult(r.value / math.pi, r.error_estimate / math.pi, r.evaluations)


def mgf_limit(t: float, tol: float = 1e-10) -> QuadratureResult:
    """Limit of the MGF as the circumference grows (triangular lattice)."""
    t = _check_t(t)
    if t == 0.0:
        return QuadratureResult(1.0, 0.0, 0)

    def f(th):
        return np.exp(3 * t + 2 * t * np.cos(th)) * bessel_i0(4 * t * np.cos(0.5 * th))

    r = integrate(f, 0.0, math.pi, tol=tol * math.pi)
    return QuadratureResult(r.value / math.pi, r.error_estimate / math.pi, r.evaluations)


def mgf_excess(chiral, t: float, rel_tol: float = 1e-10) -> QuadratureResult:
    """``mgf(chiral, t) - mgf_limit(t)`` without cancellation.

    With ``R = 4t cos(theta/2)`` and ``phi0 = theta (p-q) / (2N)``, averaging
    the Jacobi-Anger expansion over the ``N`` nodes leaves
    ``I0hat - I0 = 2 sum_{m>=1} I_{mN}(R) cos(m N phi0)``.  The difference
    is therefore integrated directly; it can be far below double-precision
    roundoff of either MGF.
    """
    ch = as_chiral(chiral)
    t = _check_t(t)
    n = ch.circumference
    if t == 0.0:
        return QuadratureResult(0.0, 0.0, 0)

    def f(th):
        r = 4 * t * np.cos(0.5 * th)
        phi0 = th * (ch.p - ch.q) / (2.0 * n)
        s = np.zeros_like(th)
        for m in range(1, 200):
            term = bessel_in(m * n, r) * np.cos(m * n * phi0)
            s = s + term
            if np.all(np.abs(term) <= 1e-17 * np.abs(s)):
                break
        return np.exp(3 * t + 2 * t * np.cos(th)) * 2.0 * s

    # scale the tolerance to the size of the answer
    probe = float(abs(f(np.array([0.0]))[0]))
    tol = max(rel_tol * probe, 1e-300)
    r = integrate(f, 0.0, math.pi, tol=tol * math.pi, raise_on_failure=False)
    res = QuadratureResult(r.value / math.pi, r.error_estimate / math.pi, r.evaluations)
    if not res.error_estimate <= 10 * rel_tol * max(abs(res.value), 1e-300):
        raise NoConvergence("excess integral did not converge", res)
    return res


def mgf_series(moments: Iterable[int], t: float) -> float:
    """Truncated series ``sum mu_k t^k / k!`` in exact rationals, then rounded."""
    tt = Fraction(t)
    total = Fraction(0)
    power = Fraction(1)
    fact = 1
    for k, mu in enumerate(moments):
        if k:
            power *= tt
            fact *= k
        total += mu * power / fact
    return float(total)


def series_terms_needed(t: float, tail: float = 1e-10, bound: float = 9.0) -> int:
    """Smallest ``K`` with ``(bound |t|)^(K+1) / (K+1)! < tail``."""
    x = bound * abs(t)
    k = 0
    term = x
    while term >= tail:
        k += 1
        term = term * x / (k + 1)
    return k


def verify_integral_identity(t: float, tol: float = 1e-10) -> tuple[float, float, float]:
    """Both sides of the ``I0^3`` integral identity for the triangular MGF.

    The left side ``int_0^1 I0^3(2 i sqrt(t log x)) dx`` is evaluated after
    ``x = exp(-s)``: for ``t >= 0`` the integrand is ``I0^3(2 sqrt(t s)) e^-s``,
    for ``t < 0`` it is ``J0^3(2 sqrt(|t| s)) e^-s``.
    """
    t = _check_t(t)
    rhs = mgf_limit(t, tol=tol).value
    if t == 0.0:
        return 1.0, rhs, abs(1.0 - rhs)
    at = abs(t)
    bessel = bessel_i0 if t > 0 else bessel_j0
    # integrand <= exp(-s + 6 sqrt(|t| s)); stop where that is below e^-50
    rt = math.sqrt(at)
    smax = ((6 * rt + math.sqrt(36 * at + 200.0)) / 2.0) ** 2

    def f(s):
        b = bessel(2.0 * np.sqrt(at * s))
        return b * b * b * np.exp(-s)

    # split into unit-ish panels so the decaying tail is resolved
    edges = np.unique(np.concatenate([np.linspace(0.0, min(smax, 40.0), 9), np.linspace(40.0, smax, 9)]))
    edges = edges[edges <= smax]
    lhs = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        lhs += integrate(f, float(a), float(b), tol=tol / len(edges)).value
    return lhs, rhs, abs(lhs - rhs)


def mgf_to_csv(rows, stream=None) -> str:
    """``rows`` of ``(t, m, err)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "m", "err"])
    for t, m, e in rows:
        w.writerow([repr(float(t)), repr(float(m)), repr(float(e))])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
