"""Lattice structures and the exact closed-walk oracle.

Coordinates are integer pairs ``(a, b)`` in the basis ``e1, e2`` of the
triangular lattice (the dual of the hexagonal lattice, i.e. hexagon centres).
The six unit steps are ``±e1, ±e2, ±(e1 - e2)`` and every vertex carries one
loop of weight 3.  A dual infinite (p,q)-nanotube is the quotient of that
lattice by the translation ``p*e1 + q*e2``.
"""

from __future__ import annotations

import io
import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

__all__ = [
    "ChiralVector",
    "LatticeCoord",
    "QuotientLattice",
    "FiniteDualGraph",
    "STEPS",
    "TRIANGULAR",
    "as_chiral",
    "canonicalize",
    "closed_walk_count",
    "build_finite_armchair55_dual",
    "half_loop_matrix",
    "normalized_trace_moments",
    "write_edge_list",
    "read_edge_list",
]

STEPS: tuple[tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class ChiralVector:
    """Chiral vector ``(p, q)`` of a nanotube, stored with ``q <= p``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p != self.p or q != self.q:
            raise TypeError("chiral vector entries must be integers")
        if p < 0 or q < 0:
            raise ValueError(f"chiral vector entries must be non-negative, got ({p}, {q})")
        if q > p:
            p, q = q, p
        if p + q < 3:
            raise ValueError(f"circumference p+q must be at least 3, got {p + q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def circumference(self) -> int:
        return self.p + self.q

    @property
    def physical(self) -> bool:
        """True when the tube can close a finite fullerene (p+q >= 5)."""
        return self.p + self.q >= 5

    @property
    def kind(self) -> str:
        if self.q == 0:
            return "zigzag"
        if self.p == self.q:
            return "armchair"
        return "chiral"

    @property
    def c(self) -> float:
        """Share ``p/(p+q)``; the limit parameter of the triangular-lattice law."""
        return self.p / (self.p + self.q)

    def __str__(self):
        return f"({self.p},{self.q})"


def as_chiral(value) -> ChiralVector:
    if isinstance(value, ChiralVector):
        return value
    p, q = value
    return ChiralVector(int(p), int(q))


@dataclass(frozen=True, order=True)
class LatticeCoord:
    a: int
    b: int

    def __add__(self, other):
        return LatticeCoord(self.a + other[0], self.b + other[1])

    def __iter__(self):
        yield self.a
        yield self.b

    def __getitem__(self, i):
        return (self.a, self.b)[i]


class _Triangular:
    """Marker for the unrolled triangular lattice (no identification)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TRIANGULAR"

    def __str__(self):
        return "triangular"

    def __reduce__(self):
        return (_Triangular, ())


TRIANGULAR = _Triangular()


def _canonical_pair(a: int, b: int, p: int, q: int) -> tuple[int, int]:
    j = (a * p + b * q) // (p * p + q * q)
    return a - j * p, b - j * q


def canonicalize(chiral, coord) -> LatticeCoord:
    """Representative of ``coord`` modulo the translation ``p*e1 + q*e2``.

    The shift ``j = floor((a*p + b*q) / (p^2 + q^2))`` is removed, which is
    idempotent and equivariant under ``coord -> coord + j*(p, q)``.
    """
    if chiral is TRIANGULAR:
        return LatticeCoord(*coord)
    if isinstance(chiral, tuple):
        p, q = chiral
    else:
        p, q = chiral.p, chiral.q
    return LatticeCoord(*_canonical_pair(coord[0], coord[1], p, q))


@dataclass(frozen=True)
class QuotientLattice:
    """Triangular lattice, optionally rolled up along ``identification``.

    ``identification`` is the raw translation vector; it is ``None`` for the
    plain triangular lattice.  Build with :meth:`nanotube` or :meth:`raw`
    (the latter keeps the given orientation, e.g. ``(1, 5)``).
    """

    identification: tuple[int, int] | None = None
    loop_weight: Fraction = Fraction(3)
    steps: tuple[tuple[int, int], ...] = STEPS

    @classmethod
    def triangular(cls) -> "QuotientLattice":
        return cls(None)

    @classmethod
    def nanotube(cls, chiral) -> "QuotientLattice":
        ch = as_chiral(chiral)
        return cls((ch.p, ch.q))

    @classmethod
    def raw(cls, p: int, q: int) -> "QuotientLattice":
        if p < 0 or q < 0 or p + q < 1:
            raise ValueError("identification vector must be non-negative and non-zero")
        return cls((int(p), int(q)))

    def canonical(self, a: int, b: int) -> tuple[int, int]:
        if self.identification is None:
            return a, b
        return _canonical_pair(a, b, *self.identification)


def _as_lattice(lattice) -> QuotientLattice:
    if isinstance(lattice, QuotientLattice):
        return lattice
    if lattice is TRIANGULAR:
        return QuotientLattice.triangular()
    return QuotientLattice.nanotube(lattice)


def closed_walk_count(lattice, k: int, box: int | None = None) -> int:
    """Exact number of closed ``k``-step walks at the origin.

    Dynamic programme over canonical coordinates; a loop step contributes
    multiplicity ``loop_weight``.  ``box`` optionally discards states whose
    canonical coordinates leave ``|a|, |b| <= box``.

    >>> closed_walk_count(TRIANGULAR, 2)
    15
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    lat = _as_lattice(lattice)
    w = lat.loop_weight
    # integer arithmetic whenever the loop weight allows it
    w = int(w) if w.denominator == 1 else w
    counts: dict[tuple[int, int], object] = {(0, 0): 1}
    for _ in range(k):
        nxt: dict[tuple[int, int], object] = defaultdict(int)
        for (a, b), c in counts.items():
            nxt[(a, b)] += w * c
            for da, db in lat.steps:
                key = lat.canonical(a + da, b + db)
                if box is not None and (abs(key[0]) > box or abs(key[1]) > box):
                    continue
                nxt[key] += c
        counts = nxt
    total = counts.get((0, 0), 0)
    total = Fraction(total)
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral walk count {total}")
    return int(total)


@dataclass
class FiniteDualGraph:
    """Simple graph with per-vertex loop weights ``deg(v)/2``."""

    n: int
    adjacency: np.ndarray
    loop_weights: list[Fraction] = field(default_factory=list)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.int64)
        if adj.shape != (self.n, self.n):
            raise ValueError("adjacency shape does not match vertex count")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj) != 0) or not np.all((adj == 0) | (adj == 1)):
            raise ValueError("adjacency must be a 0/1 matrix without loops")
        self.adjacency = adj
        if not self.loop_weights:
            self.loop_weights = [Fraction(int(d), 2) for d in self.degrees]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def degree_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees.tolist()).items()))

    def is_connected(self) -> bool:
        seen = {0}
        todo = deque([0])
        nbrs = [np.flatnonzero(row) for row in self.adjacency]
        while todo:
            v = todo.popleft()
            for u in nbrs[v]:
                if u not in seen:
                    seen.add(int(u))
                    todo.append(int(u))
        return len(seen) == self.n


def build_finite_armchair55_dual(r: int) -> FiniteDualGraph:
    """Dual of the finite (5,5)-nanotube with ``r`` hexagonal rings.

    The triangulation is laid out along the 5-fold axis: an apex vertex,
    ``6 + 2r`` levels of five vertices and a second apex.  Inside the tube,
    vertex ``(h, i)`` is joined to ``(h+1, i)``, ``(h+1, i-1)`` and
    ``(h+2, i-1)`` (indices mod 5), which is the (5,5) quotient of the
    triangular lattice read along the tube axis.  Each cap is the apex, a
    5-cycle of hexagons on the first (last) level and the missing
    level-skipping edges that leave the second (second-to-last) level with
    degree 5.  ``r = 0`` gives the dual of C60.
    """
    if r < 0:
        raise ValueError("number of rings must be non-negative")
    levels = 6 + 2 * r
    n = 2 + 5 * levels
    top, bottom = 0, n - 1

    def vid(h: int, i: int) -> int:
        return 1 + 5 * (h - 1) + (i % 5)

    adj = np.zeros((n, n), dtype=np.int64)

    def join(u: int, v: int) -> None:
        adj[u, v] = adj[v, u] = 1

    for i in range(5):
        join(top, vid(1, i))
        join(vid(1, i), vid(1, i + 1))
        join(bottom, vid(levels, i))
        join(vid(levels, i), vid(levels, i + 1))
    for h in range(1, levels + 1):
        for i in range(5):
            if h + 1 <= levels:
                join(vid(h, i), vid(h + 1, i))
                join(vid(h, i), vid(h + 1, i - 1))
            if h + 2 <= levels:
                join(vid(h, i), vid(h + 2, i - 1))
    return FiniteDualGraph(n, adj)


def half_loop_matrix(g: FiniteDualGraph) -> list[list[Fraction]]:
    """Exact ``A* + D*/2`` as a nested list of fractions."""
    out = [[Fraction(int(x)) for x in row] for row in g.adjacency]
    for v, w in enumerate(g.loop_weights):
        out[v][v] = Fraction(w)
    return out


def _integer_scaled(m) -> tuple[np.ndarray, int]:
    """Return an integer matrix ``S`` and scale ``s`` with ``m = S / s``."""
    rows = [[Fraction(x) for x in row] for row in m]
    s = 1
    for row in rows:
        for x in row:
            s = s * x.denominator // math.gcd(s, x.denominator)
    ints = [[int(x * s) for x in row] for row in rows]
    return np.array(ints, dtype=object), s


def normalized_trace_moments(m, k_max: int) -> list[Fraction]:
    """``tr(M^k)/n`` for ``k = 0..k_max`` in exact rational arithmetic."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    scaled, s = _integer_scaled(m)
    n = scaled.shape[0]
    bound = int(np.max(np.sum(np.abs(scaled), axis=1))) if n else 0
    use_int64 = bound ** max(k_max, 1) < 2 ** 62
    if use_int64:
        base = scaled.astype(np.int64)
        power = np.eye(n, dtype=np.int64)
    else:
        base = scaled
        power = np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)
    out = []
    for k in range(k_max + 1):
        tr = int(sum(int(x) for x in np.diag(power)))
        out.append(Fraction(tr, n * s ** k))
        if k < k_max:
            power = power @ base
    return out


def write_edge_list(g: FiniteDualGraph, stream=None) -> str:
    """Serialise as ``n m`` / ``u v`` lines / ``loops:`` / ``v num/den`` lines."""
    buf = io.StringIO()
    edges = g.edges()
    buf.write(f"{g.n} {len(edges)}\n")
    for u, v in edges:
        buf.write(f"{u} {v}\n")
    buf.write("loops:\n")
    for v, w in enumerate(g.loop_weights):
        w = Fraction(w)
        buf.write(f"{v} {w.numerator}/{w.denominator}\n")
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_edge_list(lines: Iterable[str] | str) -> FiniteDualGraph:
    if isinstance(lines, str):
        lines = lines.splitlines()
    it = iter(line.strip() for line in lines if line.strip() and not line.startswith("#"))
    n, m = map(int, next(it).split())
    adj = np.zeros((n, n), dtype=np.int64)
    for _ in range(m):
        u, v = map(int, next(it).split())
        adj[u, v] = adj[v, u] = 1
    if next(it) != "loops:":
        raise ValueError("missing 'loops:' section")
    weights = [Fraction(0)] * n
    for line in it:
        v, w = line.split()
        weights[int(v)] = Fraction(w)
    return FiniteDualGraph(n, adj, weights)
