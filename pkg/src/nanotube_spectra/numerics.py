"""Shared numerical kernels with explicit accuracy contracts."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels

__all__ = [
    "QuadratureResult",
    "NoConvergence",
    "ExtremumDetectionFailure",
    "Extremum",
    "SymmetricSpectrum",
    "integrate",
    "refine_extrema",
    "symmetric_eigenvalues",
    "chebyshev_T",
    "chebyshev_P",
]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self):
        return float(self.value)

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )


class NoConvergence(ArithmeticError):
    """Raised when a numerical procedure misses its tolerance.

    ``best`` carries the best available :class:`QuadratureResult` (or value).
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class ExtremumDetectionFailure(ArithmeticError):
    pass


# Gauss-Kronrod 7/15 on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 ascending nodes
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG7 = np.zeros(15)
_WG7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _evaluate(f, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.array([float(f(xi)) for xi in x])
    return y


def _gk15_batch(g, a: np.ndarray, b: np.ndarray):
    """Apply G7/K15 to many intervals with one vectorised call of ``g``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = _evaluate(g, x.ravel()).reshape(x.shape)
    k = half * (y @ _WK15)
    gs = half * (y @ _WG7)
    return k, np.abs(k - gs)


def _adaptive(g, a: float, b: float, tol: float, max_depth: int, max_intervals: int):
    k, e = _gk15_batch(g, np.array([a]), np.array([b]))
    evals = 15
    heap = [(-e[0], a, b, k[0], e[0], 0)]
    frozen = []  # intervals at max depth, never split again
    err = float(e[0])
    while err > tol and heap and len(heap) + len(frozen) < max_intervals:
        batch = []
        while heap and len(batch) < 32:
            item = heapq.heappop(heap)
            # too deep, or too narrow to split in floating point
            if item[5] >= max_depth or item[2] - item[1] <= 1e-15 * max(abs(item[1]), abs(item[2])):
                frozen.append(item)
            else:
                batch.append(item)
        if not batch:
            break
        lo, hi = [], []
        for _, a0, b0, _, _, _ in batch:
            m = 0.5 * (a0 + b0)
            lo += [a0, m]
            hi += [m, b0]
        kk, ee = _gk15_batch(g, np.array(lo), np.array(hi))
        evals += 15 * len(lo)
        for i, item in enumerate(batch):
            err -= item[4]
            for s in (2 * i, 2 * i + 1):
                err += ee[s]
                heapq.heappush(heap, (-ee[s], lo[s], hi[s], kk[s], ee[s], item[5] + 1))
        if not math.isfinite(err):
            break
    items = heap + frozen
    total = math.fsum(it[3] for it in items)
    err = math.fsum(it[4] for it in items)
    return total, err, evals


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    tol: float = 1e-10,
    endpoint_flags: tuple[bool, bool] = (False, False),
    max_depth: int = 40,
    max_intervals: int = 20000,
    raise_on_failure: bool = True,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over ``[lo, hi]``.

    ``f`` should accept a numpy array; scalar callables are wrapped.  An
    endpoint flagged in ``endpoint_flags`` is treated as an inverse-square-root
    type singularity and removed with ``x = lo + s**2`` (resp. ``hi - s**2``).

    Raises :class:`NoConvergence` (carrying the best estimate) if the error
    estimate stays above ``tol``.
    """
    if not hi > lo:
        if hi == lo:
            return QuadratureResult(0.0, 0.0, 0)
        raise ValueError("integration bounds must satisfy lo < hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    left, right = endpoint_flags
    if left and right:
        mid = 0.5 * (lo + hi)
        a = integrate(f, lo, mid, tol / 2, (True, False), max_depth, max_intervals, False)
        b = integrate(f, mid, hi, tol / 2, (False, True), max_depth, max_intervals, False)
        res = a + b
        if raise_on_failure and res.error_estimate > tol:
            raise NoConvergence(f"quadrature error {res.error_estimate:.3g} > {tol:.3g}", res)
        return res
    # lo + s^2 rounds to lo for tiny s; keep the point one ulp inside so an
    # integrand that is singular at lo is not evaluated at the singularity
    if left:
        inner = math.nextafter(lo, hi)

        def g(s, _f=f, _lo=lo):
            return 2.0 * s * _evaluate(_f, np.maximum(_lo + s * s, inner))
        a, b = 0.0, math.sqrt(hi - lo)
    elif right:
        inner = math.nextafter(hi, lo)

        def g(s, _f=f, _hi=hi):
            return 2.0 * s * _evaluate(_f, np.minimum(_hi - s * s, inner))
        a, b = 0.0, math.sqrt(hi - lo)
    else:
        g, a, b = f, lo, hi
    total, err, evals = _adaptive(g, a, b, tol, max_depth, max_intervals)
    res = QuadratureResult(float(total), float(err), int(evals))
    if raise_on_failure and not (err <= tol):
        raise NoConvergence(f"quadrature error {err:.3g} > {tol:.3g}", res)
    return res


@dataclass(frozen=True)
class Extremum:
    x: float
    value: float
    kind: str  # "min" or "max"

    def __iter__(self):
        yield self.x
        yield self.value
        yield self.kind


def refine_extrema(
    f: Callable,
    lo: float,
    hi: float,
    scan_points: int = 4096,
    tol: float = 1e-12,
    derivative: Callable | None = None,
    max_iter: int = 200,
) -> list[Extremum]:
    """Locate interior extrema of ``f`` on ``(lo, hi)``.

    A centred difference with step ``(hi - lo) / (8 * scan_points)`` is
    sampled at ``scan_points`` interior points; each sign change is bisected
    until the bracket is narrower than ``tol``.  If ``derivative`` is given it
    replaces the difference quotient.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    if scan_points < 16:
        raise ValueError("scan_points must be at least 16")
    width = hi - lo
    h0 = width / (8 * scan_points)
    h_min = 1e-6 * width

    def slope(x, h=h0):
        if derivative is not None:
            return np.asarray(derivative(x), dtype=float)
        return (np.asarray(f(x + h), dtype=float) - np.asarray(f(x - h), dtype=float)) / (2 * h)

    xs = lo + (np.arange(scan_points) + 0.5) * (width / scan_points)
    d = slope(xs)
    if not np.all(np.isfinite(d)):
        raise ExtremumDetectionFailure("non-finite derivative on the scan grid")
    sgn = np.sign(d)
    out: list[Extremum] = []
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0):
        a, b = float(xs[i]), float(xs[i + 1])
        sa = sgn[i]
        it = 0
        while b - a > tol:
            if it >= max_iter:
                raise ExtremumDetectionFailure(
                    f"bracket [{a}, {b}] unresolved after {max_iter} bisections")
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            sm = np.sign(float(slope(np.array([m]), max(min(h0, (b - a) / 4), h_min))[0]))
            if sm == 0:
                a = b = m
                break
            if sm == sa:
                a = m
            else:
                b = m
            it += 1
        x = 0.5 * (a + b)
        fx = float(np.asarray(f(np.array([x])), dtype=float)[0])
        delta = max(16 * h_min, 1e-4 * width)
        around = np.asarray(f(np.array([x - delta, x + delta])), dtype=float)
        kind = "min" if around.sum() - 2 * fx > 0 else "max"
        out.append(Extremum(x, fx, kind))
    # exact zeros on the grid
    for i in np.flatnonzero(sgn == 0):
        x = float(xs[i])
        if 0 < i < scan_points - 1 and sgn[i - 1] * sgn[i + 1] < 0:
            fx = float(np.asarray(f(np.array([x])), dtype=float)[0])
            kind = "min" if sgn[i + 1] > 0 else "max"
            out.append(Extremum(x, fx, kind))
    out.sort(key=lambda e: e.x)
    return out


@dataclass(frozen=True)
class SymmetricSpectrum:
    eigenvalues: np.ndarray
    residual: float
    sweeps: int = 0
    off_norm: float = 0.0


def symmetric_eigenvalues(m, tol: float = 1e-12, max_sweeps: int = 100,
                          vectors: bool = True) -> SymmetricSpectrum:
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm is below
    ``tol * ||M||_F``.  With ``vectors=True`` the residual
    ``max_i ||M v_i - lambda_i v_i||`` is reported.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1.0)
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    diag, vecs, sweeps, off, _ = kernels.jacobi_eigen(np.ascontiguousarray(a), tol, max_sweeps, vectors)
    order = np.argsort(diag)
    eig = diag[order]
    residual = float("nan")
    if vecs is not None:
        vecs = vecs[:, order]
        residual = float(np.max(np.linalg.norm(a @ vecs - vecs * eig[None, :], axis=0), initial=0.0))
    return SymmetricSpectrum(eig, residual, int(sweeps), float(off))


def chebyshev_T(n: int, x):
    """Chebyshev polynomial of the first kind by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    t0, t1 = np.ones_like(x), x
    if n == 0:
        return t0 if t0.ndim else float(t0)
    for _ in range(n - 1):
        t0, t1 = t1, 2 * x * t1 - t0
    return t1 if t1.ndim else float(t1)


def chebyshev_P(n: int, x):
    """Chebyshev polynomial of the second kind; ``P_{-1} = 0``."""
    if n < -1:
        raise ValueError("degree must be at least -1")
    x = np.asarray(x, dtype=float)
    if n == -1:
        z = np.zeros_like(x)
        return z if z.ndim else 0.0
    u0, u1 = np.ones_like(x), 2 * x
    if n == 0:
        return u0 if u0.ndim else float(u0)
    for _ in range(n - 1):
        u0, u1 = u1, 2 * x * u1 - u0
    return u1 if u1.ndim else float(u1)
