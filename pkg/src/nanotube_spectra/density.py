"""Probability densities of the random eigenvalue.

Conditioning on the discrete angle index turns every law into a mixture of
transformed cosine laws.  Zigzag and armchair tubes give arcsine-type pieces
in closed form; chiral tubes are handled numerically by splitting each
conditional map into monotone branches and inverting them.  The triangular
limit is an oscillatory Bessel integral.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .lattice import as_chiral
from .mgf import bessel_j0
from .numerics import (
    Extremum,
    NoConvergence,
    QuadratureResult,
    chebyshev_P,
    chebyshev_T,
    _gk15_batch,
    integrate,
    refine_extrema,
)

__all__ = [
    "Piece",
    "Atom",
    "PiecewiseDensity",
    "PhiFamily",
    "build_zigzag",
    "build_armchair",
    "pdf_zigzag",
    "pdf_armchair",
    "pdf_chiral_numeric",
    "pdf_triangular",
    "pdf_triangular_mixture",
    "cdf_triangular_mixture",
    "build_density",
    "cdf",
    "cdf_grid",
    "ks_grid",
    "sample_ks",
    "density_moment",
    "armchair_groups",
    "grid_to_csv",
    "atoms_to_csv",
]

_QUAD_TOL = 1e-11


@dataclass(frozen=True)
class Piece:
    """Absolutely continuous part on ``(lo, hi)``; ``evaluator`` is vectorised.

    ``singular`` flags inverse-square-root behaviour at ``(lo, hi)``.
    """

    lo: float
    hi: float
    evaluator: Callable[[np.ndarray], np.ndarray]
    singular: tuple[bool, bool] = (False, False)
    tag: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.lo) & (x < self.hi)
        out = np.zeros_like(x)
        if np.any(inside):
            out[inside] = self.evaluator(x[inside])
        return out

    def integral(self, a: float | None = None, b: float | None = None, tol: float = _QUAD_TOL,
                 weight: Callable | None = None) -> QuadratureResult:
        a = self.lo if a is None else max(a, self.lo)
        b = self.hi if b is None else min(b, self.hi)
        if b <= a:
            return QuadratureResult(0.0, 0.0, 0)
        flags = (self.singular[0] and a == self.lo, self.singular[1] and b == self.hi)
        if weight is None:
            f = self.evaluator
        else:
            f = (lambda x: self.evaluator(x) * weight(x))
            # absolute tolerance relative to the size of the weight
            tol = tol * max(1.0, float(np.max(np.abs(weight(np.array([a, b]))))))
        return integrate(f, a, b, tol=tol, endpoint_flags=flags)


@dataclass(frozen=True)
class Atom:
    x: float
    mass: Fraction


@dataclass
class PiecewiseDensity:
    pieces: list[Piece]
    atoms: list[Atom] = field(default_factory=list)
    total_mass_check: float = float("nan")
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for pc in self.pieces:
            if not (-1e-12 <= pc.lo < pc.hi <= 9.0 + 1e-12):
                raise ValueError(f"piece ({pc.lo}, {pc.hi}) outside [0, 9]")
        for at in self.atoms:
            if not 0.0 <= at.x <= 9.0:
                raise ValueError(f"atom at {at.x} outside [0, 9]")
        if math.isnan(self.total_mass_check):
            self.total_mass_check = self.total_mass()

    @property
    def atom_mass(self) -> Fraction:
        return sum((a.mass for a in self.atoms), Fraction(0))

    def piece_masses(self) -> list[float]:
        return [pc.integral().value for pc in self.pieces]

    def total_mass(self) -> float:
        return math.fsum(self.piece_masses()) + float(self.atom_mass)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for pc in self.pieces:
            out = out + pc(x)
        return out if out.ndim else float(out)

    __call__ = pdf

    def intervals(self) -> list[tuple[float, float]]:
        return [(pc.lo, pc.hi) for pc in self.pieces]

    def endpoints(self) -> list[float]:
        pts = set()
        for pc in self.pieces:
            pts.add(pc.lo)
            pts.add(pc.hi)
        return sorted(pts)


def _piece_cdf(pc: Piece, x: float, mass: float) -> float:
    if x <= pc.lo:
        return 0.0
    if x >= pc.hi:
        return mass
    # integrate from the nearer end so the flagged endpoint is the one touched
    if x - pc.lo <= pc.hi - x:
        return pc.integral(pc.lo, x).value
    return mass - pc.integral(x, pc.hi).value


def cdf(d: PiecewiseDensity, x: float) -> float:
    """``P(Lambda <= x)``: atoms at or below ``x`` plus the pieces up to ``x``."""
    x = float(x)
    total = float(sum((a.mass for a in d.atoms if a.x <= x), Fraction(0)))
    masses = d.meta.get("_masses")
    if masses is None:
        masses = d.piece_masses()
        d.meta["_masses"] = masses
    for pc, m in zip(d.pieces, masses):
        total += _piece_cdf(pc, x, m)
    return total


def _segment_integrals(pc: Piece, nodes: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    # one batched G7/K15 pass; segments that miss the tolerance, and the
    # segments touching flagged endpoints, go through adaptive quadrature
    lo, hi = nodes[:-1], nodes[1:]
    k, e = _gk15_batch(pc.evaluator, lo, hi)
    redo = e > tol
    if pc.singular[0]:
        redo[0] = True
    if pc.singular[1]:
        redo[-1] = True
    for i in np.flatnonzero(redo):
        k[i] = pc.integral(float(lo[i]), float(hi[i]), tol=tol).value
    return k


def cdf_grid(d: PiecewiseDensity, xs, tol: float = 1e-10) -> np.ndarray:
    """CDF at many points by cumulative integration between sorted nodes.

    ``tol`` is the absolute tolerance per segment.
    """
    xs = np.asarray(xs, dtype=float)
    order = np.argsort(xs)
    xsorted = xs[order]
    out = np.zeros_like(xsorted)
    for pc in d.pieces:
        inside = np.unique(xsorted[(xsorted > pc.lo) & (xsorted < pc.hi)])
        nodes = np.concatenate([[pc.lo], inside, [pc.hi]])
        cum = np.concatenate([[0.0], np.cumsum(_segment_integrals(pc, nodes, tol))])
        # cum[i] is the mass below nodes[i]
        idx = np.clip(np.searchsorted(nodes, xsorted, side="right") - 1, 0, len(nodes) - 1)
        val = cum[idx]
        val[xsorted <= pc.lo] = 0.0
        val[xsorted >= pc.hi] = cum[-1]
        out += val
    for at in d.atoms:
        out += float(at.mass) * (xsorted >= at.x)
    res = np.empty_like(out)
    res[order] = out
    return res


def ks_grid(d: PiecewiseDensity, n_grid: int = 6000) -> np.ndarray:
    """Uniform grid on ``[0, 9]`` plus points clustered at piece endpoints."""
    pts = [np.linspace(0.0, 9.0, n_grid)]
    offs = 10.0 ** -np.arange(2, 9)
    for e in d.endpoints() + [a.x for a in d.atoms]:
        pts.append(e + offs)
        pts.append(e - offs)
        pts.append([e])
    g = np.unique(np.concatenate(pts))
    return g[(g >= 0.0) & (g <= 9.0)]


def sample_ks(d: PiecewiseDensity, sample, n_grid: int = 6000) -> tuple[float, float]:
    """Kolmogorov distance between a sample and ``d``, evaluated on a grid.

    Returns ``(on_grid, upper)``: the largest gap at the grid points and a
    rigorous bound for the supremum over all ``x`` (both CDFs are
    non-decreasing, so between nodes the gap cannot exceed the grid gap plus
    the larger CDF increment).
    """
    xs = np.asarray(sample, dtype=float).copy()
    # the maps land on atoms only up to roundoff
    for a in d.atoms:
        xs[np.abs(xs - a.x) <= 1e-9] = a.x
    xs.sort()
    n = xs.size
    g = ks_grid(d, n_grid)
    F = cdf_grid(d, g)
    Fn = np.searchsorted(xs, g, side="right") / n
    Fn_left = np.searchsorted(xs, g, side="left") / n
    # left limits of F only differ at atoms
    F_left = F - np.array([sum(float(a.mass) for a in d.atoms if a.x == x) for x in g])
    on_grid = float(max(np.max(np.abs(Fn - F)), np.max(np.abs(Fn_left - F_left))))
    # between nodes x_i < x < x_{i+1}
    up = np.maximum(Fn_left[1:] - F[:-1], F_left[1:] - Fn[:-1])
    return on_grid, float(max(on_grid, np.max(up)))


def density_moment(d: PiecewiseDensity, k: int) -> float:
    """``int x^k dF``."""
    total = math.fsum(pc.integral(weight=lambda x, k=k: x ** k).value for pc in d.pieces)
    return total + math.fsum(float(a.mass) * a.x ** k for a in d.atoms)


# ---------------------------------------------------------------- zigzag

def _arcsine_piece(r: float, weight: float, tag) -> Piece:
    lo, hi = (r - 1.0) ** 2, (r + 1.0) ** 2

    def ev(x, r=r, w=weight):
        # factored form keeps the endpoint offsets exact
        z = (x - (r - 1) ** 2) * ((r + 1) ** 2 - x)
        out = np.zeros_like(x)
        ok = z > 0
        out[ok] = w / (math.pi * np.sqrt(z[ok]))
        return out

    return Piece(lo, hi, ev, (True, True), tag)


@lru_cache(maxsize=64)
def build_zigzag(p: int) -> PiecewiseDensity:
    """Mixture over ``j`` of arcsine laws on ``((r_j - 1)^2, (r_j + 1)^2)``,
    ``r_j = 2|cos(pi j / p)|``.  A vanishing ``r_j`` (even ``p``) is an atom
    of mass ``1/p`` at ``x = 1``.
    """
    if int(p) != p or p < 3:
        raise ValueError("zigzag density needs an integer p >= 3")
    p = int(p)
    pieces, atoms = [], []
    for j in range(p):
        r = 2 * abs(math.cos(math.pi * j / p))
        if r < 1e-12:
            atoms.append(Atom(1.0, Fraction(1, p)))
        else:
            pieces.append(_arcsine_piece(r, 1.0 / p, ("j", j)))
    return PiecewiseDensity(pieces, atoms, meta={"kind": "zigzag", "p": p})


def pdf_zigzag(p: int, x):
    return build_zigzag(p).pdf(x)


# ---------------------------------------------------------------- armchair

def _quad_branch(a: float, sign: int, lo: float, hi: float, weight: float,
                 singular: tuple[bool, bool], tag) -> Piece:
    # x = 4w^2 + 4aw + 1 with 2w = -a + sign*s, s = sqrt(a^2 + x - 1);
    # w has density 2/(pi sqrt(1-w^2)) on (0, 1)
    def ev(x, a=a, sign=sign, wt=weight):
        s2 = a * a + x - 1.0
        s = np.sqrt(np.maximum(s2, 0.0))
        tw = -a + sign * s
        z = (2.0 - tw) * (2.0 + tw) * s2
        out = np.zeros_like(x)
        ok = z > 0
        out[ok] = wt / (math.pi * np.sqrt(z[ok]))
        return out

    return Piece(lo, hi, ev, singular, tag)


@lru_cache(maxsize=64)
def build_armchair(p: int) -> PiecewiseDensity:
    """Mixture over ``j = 0..p`` of the laws of ``h_j(w) = 4w^2 + 4a_j w + 1``.

    ``a_j = cos(pi j / p)``; the end indices ``j = 0, p`` carry weight
    ``1/(2p)`` and the others ``1/p``.  For ``a_j >= 0`` the map is increasing
    on ``(0, 1)``; otherwise it falls to ``1 - a_j^2`` at ``w = -a_j/2`` and
    rises again, giving two branches.
    """
    if int(p) != p or p < 2:
        raise ValueError("armchair density needs an integer p >= 2")
    p = int(p)
    pieces = []
    for j in range(p + 1):
        a = math.cos(math.pi * j / p)
        if 2 * j == p:
            a = 0.0
        wt = 1.0 / (2 * p) if j in (0, p) else 1.0 / p
        top = 5.0 + 4.0 * a
        if a >= 0:
            pieces.append(_quad_branch(a, +1, 1.0, top, wt, (a == 0.0, True),
                                       ("j", j, "increasing")))
        else:
            vertex = 1.0 - a * a
            pieces.append(_quad_branch(a, -1, vertex, 1.0, wt, (True, False),
                                       ("j", j, "decreasing")))
            pieces.append(_quad_branch(a, +1, vertex, top, wt, (True, True),
                                       ("j", j, "increasing")))
    return PiecewiseDensity(pieces, [], meta={"kind": "armchair", "p": p})


def pdf_armchair(p: int, x):
    return build_armchair(p).pdf(x)


def armchair_groups(p: int) -> list[dict]:
    """Regroup armchair branches by analytic form.

    Each branch has ``2w = |a| - s`` (form ``"minus"``: the increasing branch
    of ``a > 0`` or the decreasing branch of ``a < 0``) or ``2w = |a| + s``
    (form ``"plus"``: the increasing branch of ``a < 0``).  Branches sharing
    ``|a|`` and form have one formula and their supports join up.
    """
    d = build_armchair(p)
    groups: dict[tuple, dict] = {}
    for pc in d.pieces:
        j = pc.tag[1]
        a = math.cos(math.pi * j / p) if 2 * j != p else 0.0
        form = "plus" if (a < 0 and pc.tag[2] == "increasing") else "minus"
        key = (round(abs(a), 12), form)
        g = groups.setdefault(key, {"abs_a": abs(a), "form": form, "pieces": []})
        g["pieces"].append(pc)
    out = []
    for key in sorted(groups, key=lambda k: (k[1] == "plus", -k[0])):
        g = groups[key]
        g["lo"] = min(pc.lo for pc in g["pieces"])
        g["hi"] = max(pc.hi for pc in g["pieces"])
        g["density"] = (lambda x, ps=tuple(g["pieces"]): sum(pc(x) for pc in ps))
        out.append(g)
    return out


# ---------------------------------------------------------------- chiral

class PhiFamily:
    """Conditional maps ``phi_j(v)`` with ``v = cos(U/N)``, ``N = p+q``.

    ``phi_j(v) = 3 + 2[T_N(v) + c_j (T_p(v) + T_q(v))
    + d_j sqrt(1-v^2) (P_{q-1}(v) - P_{p-1}(v))]`` with
    ``c_j = cos(2 pi j/N)``, ``d_j = sin(2 pi j/N)``.
    The same map in the angle, ``g_j(u) = phi_j(cos(u/N))``, is used for
    inversion.
    """

    def __init__(self, chiral):
        self.chiral = as_chiral(chiral)
        self.p, self.q = self.chiral.p, self.chiral.q
        self.n = self.p + self.q
        self.v_lo = math.cos(math.pi / self.n)

    def c(self, j: int) -> float:
        return math.cos(2 * math.pi * j / self.n)

    def d(self, j: int) -> float:
        return math.sin(2 * math.pi * j / self.n)

    def phi(self, j: int, v):
        v = np.asarray(v, dtype=float)
        root = np.sqrt(np.clip(1.0 - v * v, 0.0, None))
        return 3.0 + 2.0 * (
            chebyshev_T(self.n, v)
            + self.c(j) * (chebyshev_T(self.p, v) + chebyshev_T(self.q, v))
            + self.d(j) * root * (chebyshev_P(self.q - 1, v) - chebyshev_P(self.p - 1, v))
        )

    def g(self, j: int, u):
        u = np.asarray(u, dtype=float)
        n = self.n
        return 3.0 + 2.0 * (np.cos(u) + np.cos((self.p * u + 2 * np.pi * j) / n)
                            + np.cos((self.q * u - 2 * np.pi * j) / n))

    def dg(self, j: int, u):
        u = np.asarray(u, dtype=float)
        n = self.n
        return -2.0 * (np.sin(u) + (self.p / n) * np.sin((self.p * u + 2 * np.pi * j) / n)
                       + (self.q / n) * np.sin((self.q * u - 2 * np.pi * j) / n))

    def u_of_v(self, v):
        return self.n * np.arccos(np.clip(v, -1.0, 1.0))

    def v_of_u(self, u):
        return np.cos(np.asarray(u, dtype=float) / self.n)

    def extrema(self, j: int, scan_points: int = 4096, tol: float = 1e-12) -> list[Extremum]:
        return refine_extrema(lambda v: self.phi(j, v), self.v_lo, 1.0, scan_points, tol)


def _monotone_branch(fam: PhiFamily, j: int, ua: float, ub: float, grid_size: int,
                     flag_tol: float) -> Piece:
    us = np.linspace(ua, ub, grid_size)
    gs = fam.g(j, us)
    increasing = gs[-1] > gs[0]
    if not increasing:
        us, gs = us[::-1], gs[::-1]
    # tiny non-monotone wobble at a flat extremum would break searchsorted
    gs = np.maximum.accumulate(gs)
    lo, hi = float(gs[0]), float(gs[-1])
    n = fam.n

    def invert(x):
        i = np.clip(np.searchsorted(gs, x) - 1, 0, len(gs) - 2)
        a, b = us[i].copy(), us[i + 1].copy()
        for _ in range(60):
            m = 0.5 * (a + b)
            below = fam.g(j, m) < x
            a = np.where(below, m, a)
            b = np.where(below, b, m)
        return 0.5 * (a + b)

    def ev(x):
        u = invert(np.asarray(x, dtype=float))
        dg = np.abs(fam.dg(j, u))
        out = np.zeros_like(dg)
        ok = dg > 0
        out[ok] = 1.0 / (n * math.pi * dg[ok])
        return out

    scale = 2.0 * (1 + max(fam.p, 1) / n + fam.q / n)
    flat_lo = abs(float(fam.dg(j, us[0]))) < flag_tol * scale
    flat_hi = abs(float(fam.dg(j, us[-1]))) < flag_tol * scale
    return Piece(lo, hi, ev, (flat_lo, flat_hi), ("j", j, "increasing" if increasing else "decreasing",
                                                   float(min(ua, ub)), float(max(ua, ub))))


def pdf_chiral_numeric(chiral, grid_size: int = 1024, scan_points: int = 4096,
                       tol: float = 1e-12) -> PiecewiseDensity:
    """Numerical density for ``0 < q < p``.

    For each ``j``: build ``phi_j``, locate its interior extrema on
    ``(cos(pi/N), 1)``, split into monotone branches, invert each branch
    numerically and apply the change-of-variables formula with weight
    ``1/N``.  ``grid_size`` is the size of the lookup table that brackets the
    inversion.
    """
    ch = as_chiral(chiral)
    if not 0 < ch.q < ch.p:
        raise ValueError("chiral density needs 0 < q < p")
    if grid_size < 256:
        raise ValueError("grid_size must be at least 256")
    fam = PhiFamily(ch)
    pieces = []
    extrema: dict[int, list[Extremum]] = {}
    for j in range(fam.n):
        ext = fam.extrema(j, scan_points, tol)
        extrema[j] = ext
        # breakpoints in v, converted to the angle u = N arccos v
        vs = [fam.v_lo] + [e.x for e in ext] + [1.0]
        us = sorted({float(fam.u_of_v(v)) for v in vs})
        us[0], us[-1] = 0.0, math.pi
        for ua, ub in zip(us[:-1], us[1:]):
            pieces.append(_monotone_branch(fam, j, ua, ub, grid_size, 1e-6))
    return PiecewiseDensity(pieces, [], meta={"kind": "chiral", "p": ch.p, "q": ch.q,
                                               "extrema": extrema, "family": fam})


def build_density(chiral, grid_size: int = 1024) -> PiecewiseDensity:
    ch = as_chiral(chiral)
    if ch.q == 0:
        return build_zigzag(ch.p)
    if ch.q == ch.p:
        return build_armchair(ch.p)
    return pdf_chiral_numeric(ch, grid_size)


# ---------------------------------------------------------------- triangular limit

def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _j0_zeros(count: int) -> np.ndarray:
    # McMahon expansion; accurate to ~1e-4 for the first zero, better after
    b = (np.arange(1, count + 1) - 0.25) * math.pi
    return b + 1 / (8 * b) - 124 / (3 * (8 * b) ** 3) + 120928 / (15 * (8 * b) ** 5)


def _iterated_average(s: np.ndarray) -> float:
    s = np.asarray(s, dtype=float)
    while len(s) > 1:
        s = 0.5 * (s[:-1] + s[1:])
    return float(s[0])


def pdf_triangular(x: float, cutoff: int = 200, n_points: int = 32,
                   tol: float = 1e-6, raise_on_failure: bool = True) -> QuadratureResult:
    """``(1/2) int_0^inf t J0(t sqrt x) J0(t)^3 dt`` for ``x > 0``.

    The axis is cut at the first ``cutoff`` zeros of ``J0``; each panel is
    integrated by Gauss-Legendre with ``n_points`` nodes.  Panel lengths are
    close to ``pi``, so every frequency of the integrand advances the phase by
    the same amount modulo ``2 pi`` and the partial sums oscillate with one
    period.  Iterated pairwise averaging of the second half of the partial
    sums removes that oscillation; averages over two other windows give the
    error estimate.  Convergence
    degrades near ``x = 1`` and ``x = 9``, where the density is singular.
    """
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    if cutoff < 8:
        raise ValueError("cutoff must be at least 8")
    nodes, weights = _gauss_legendre(n_points)
    edges = np.concatenate([[0.0], _j0_zeros(cutoff)])
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    t = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
    j0 = bessel_j0(t.ravel()).reshape(t.shape)
    jx = bessel_j0((t * math.sqrt(x)).ravel()).reshape(t.shape)
    panel = half * ((t * jx * j0 ** 3) @ weights)
    sums = 0.5 * np.cumsum(panel)
    m = len(sums)
    value = _iterated_average(sums[m // 2:])
    # windows of other lengths and positions give the error estimate
    err = max(abs(value - _iterated_average(sums[m // 4: m // 4 + m // 2])),
              abs(value - _iterated_average(sums[m // 2 + m // 4:])))
    res = QuadratureResult(value, err, int(t.size))
    if raise_on_failure and err > tol:
        raise NoConvergence(f"triangular density at x={x}: error {err:.3g} > {tol:.3g}", res)
    return res


def _mixture_integrand(x: float):
    # given U = u, Lambda is arcsine on ((r-1)^2, (r+1)^2) with r = 2 cos(u/2)
    def f(u):
        r = 2 * np.cos(0.5 * u)
        z = 4 * r * r - (r * r + 1 - x) ** 2
        out = np.zeros_like(u)
        ok = z > 0
        out[ok] = 1.0 / (math.pi * np.sqrt(z[ok]))
        return out / math.pi
    return f


def _mixture_breaks(x: float) -> list[float]:
    # u where x hits an end of the conditional support: r = |1 +- sqrt x|
    pts = {0.0, math.pi}
    s = math.sqrt(x)
    for r in (1 + s, abs(1 - s)):
        if 0 < r < 2:
            pts.add(2 * math.acos(r / 2))
    return sorted(pts)


def pdf_triangular_mixture(x: float, tol: float = 1e-10) -> QuadratureResult:
    """Triangular-limit density as an average of arcsine densities (oracle)."""
    x = float(x)
    if not 0 < x < 9:
        return QuadratureResult(0.0, 0.0, 0)
    f = _mixture_integrand(x)
    br = _mixture_breaks(x)
    total = QuadratureResult(0.0, 0.0, 0)
    for a, b in zip(br[:-1], br[1:]):
        mid = f(np.array([0.5 * (a + b)]))[0]
        if mid == 0.0:
            continue
        # the inner endpoints are inverse-square-root points
        flags = (a != 0.0, b != math.pi)
        total = total + integrate(f, a, b, tol=tol, endpoint_flags=flags)
    return total


def cdf_triangular_mixture(x, tol: float = 1e-11) -> np.ndarray:
    """Triangular-limit CDF as an average of arcsine CDFs."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        if xv <= 0:
            out[i] = 0.0
            continue
        if xv >= 9:
            out[i] = 1.0
            continue

        def f(u, xv=xv):
            r = 2 * np.cos(0.5 * u)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = np.where(r > 0, (xv - r * r - 1) / (2 * r), np.where(xv >= 1, 1.0, -1.0))
            return (1.0 - np.arccos(np.clip(z, -1.0, 1.0)) / math.pi) / math.pi

        br = _mixture_breaks(xv)
        out[i] = math.fsum(integrate(f, a, b, tol=tol).value for a, b in zip(br[:-1], br[1:]))
    return out if np.ndim(x) else float(out[0])


# ---------------------------------------------------------------- export

def grid_to_csv(d: PiecewiseDensity, xs, stream=None) -> str:
    xs = np.asarray(xs, dtype=float)
    f = np.atleast_1d(d.pdf(xs))
    F = cdf_grid(d, xs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "pdf", "cdf"])
    for a, b, c in zip(xs, f, F):
        w.writerow([repr(float(a)), repr(float(b)), repr(float(c))])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def atoms_to_csv(d: PiecewiseDensity, stream=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "mass"])
    for a in d.atoms:
        w.writerow([repr(float(a.x)), str(a.mass)])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
