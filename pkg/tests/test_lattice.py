import numpy as np
import networkx as nx
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from nanotube_spectra.lattice import (
    STEPS,
    TRIANGULAR,
    ChiralVector,
    QuotientLattice,
    as_chiral,
    build_finite_armchair55_dual,
    canonicalize,
    closed_walk_count,
    half_loop_matrix,
    normalized_trace_moments,
    read_edge_list,
    write_edge_list,
)


def test_chiral_vector_normalises_orientation():
    assert as_chiral((1, 5)) == ChiralVector(5, 1)
    assert ChiralVector(5, 5).kind == "armchair"
    assert ChiralVector(0, 6).kind == "zigzag"
    assert ChiralVector(5, 2).kind == "chiral"
    assert not ChiralVector(2, 2).physical


@pytest.mark.parametrize("bad", [(-1, 5), (1, 1), (0, 2)])
def test_chiral_vector_rejects(bad):
    with pytest.raises(ValueError):
        ChiralVector(*bad)


@given(st.integers(1, 9), st.integers(0, 9), st.integers(-30, 30), st.integers(-30, 30), st.integers(-4, 4))
def test_canonicalize_is_translation_invariant(p, q, a, b, m):
    if p + q < 3:
        return
    ch = (p, q)
    c1 = canonicalize(ch, (a, b))
    c2 = canonicalize(ch, (a + m * p, b + m * q))
    assert c1 == c2


def _cylinder_walks(p, q, k, length):
    # independent oracle: a long finite piece of the quotient, built with networkx
    g = nx.Graph()
    g.add_node((0, 0))
    lat = QuotientLattice.raw(p, q)
    frontier = {(0, 0)}
    seen = {(0, 0)}
    for _ in range(length):
        nxt = set()
        for v in frontier:
            for da, db in STEPS:
                w = lat.canonical(v[0] + da, v[1] + db)
                g.add_edge(v, w)
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    nodes = list(g.nodes)
    a = nx.to_numpy_array(g, nodelist=nodes, dtype=object).astype(np.int64).astype(object)
    m = a + 3 * np.identity(len(nodes), dtype=np.int64).astype(object)
    e = np.zeros(len(nodes), dtype=object)
    e[nodes.index((0, 0))] = 1
    for _ in range(k):
        e = m.dot(e)
    return int(e[nodes.index((0, 0))])


@pytest.mark.parametrize("pq", [(5, 0), (5, 1), (3, 3), (4, 2)])
def test_walk_count_matches_matrix_power(pq):
    for k in range(0, 8):
        assert closed_walk_count(QuotientLattice.raw(*pq), k) == _cylinder_walks(*pq, k, k)


def test_triangular_walks():
    assert [closed_walk_count(TRIANGULAR, k) for k in range(7)] == [1, 3, 15, 93, 639, 4653, 35169]


@pytest.mark.parametrize("r", [0, 1, 3])
def test_finite_dual_is_planar_triangulation(r):
    g = build_finite_armchair55_dual(r)
    G = nx.from_numpy_array(g.adjacency)
    assert nx.check_planarity(G)[0]
    assert nx.is_connected(G)
    # every edge lies on exactly two triangles in a triangulated sphere
    tri = sum(nx.triangles(G).values()) // 3
    assert tri == 2 * g.n - 4
    assert g.edge_count == 3 * g.n - 6
    assert g.degree_histogram() == {5: 12, 6: g.n - 12}


def test_r0_is_the_c60_dual_icosahedral_degree_pattern():
    g = build_finite_armchair55_dual(0)
    G = nx.from_numpy_array(g.adjacency)
    fives = [v for v in G if G.degree(v) == 5]
    # in the C60 dual no two pentagons touch
    assert all(G.degree(u) == 6 for v in fives for u in G[v])


def test_traces_exact_and_against_numpy():
    g = build_finite_armchair55_dual(1)
    m = half_loop_matrix(g)
    tr = normalized_trace_moments(m, 6)
    assert tr[0] == 1
    assert tr[1] == Fraction(sum(g.degrees), 2 * g.n)
    mf = np.array([[float(x) for x in row] for row in m])
    for k in range(7):
        assert float(tr[k]) == pytest.approx(np.trace(np.linalg.matrix_power(mf, k)) / g.n, rel=1e-12)


def test_edge_list_roundtrip():
    g = build_finite_armchair55_dual(2)
    h = read_edge_list(write_edge_list(g))
    assert np.array_equal(g.adjacency, h.adjacency)
    assert g.loop_weights == h.loop_weights


@settings(max_examples=20, deadline=None)
@given(st.integers(5, 8), st.integers(0, 4))
def test_orientation_does_not_change_walk_counts(p, q):
    for k in range(0, p + q + 2):
        assert closed_walk_count(QuotientLattice.raw(p, q), k) == closed_walk_count(QuotientLattice.raw(q, p), k)
