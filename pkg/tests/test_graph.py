import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from racgfib.graph import (
    Bipartition,
    Graph,
    NotBipartite,
    VertexSet,
    bipartition_classes,
    build_graph,
    component_count,
    is_connected_induced,
    is_isomorphic,
)
from racgfib.polytopes import build_24cell_skeleton, build_hypercube


def path3():
    return build_graph(3, [(0, 1), (1, 2)])


def test_build_graph_examples():
    assert path3().edge_count == 2
    assert build_hypercube(4).edge_count == 32
    assert build_graph(2, [(0, 1), (1, 0)]).edge_count == 1


@pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)], [(1, 1)]])
def test_build_graph_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        build_graph(3, edges)


def test_graph_rejects_asymmetric_adjacency():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))


def test_vertex_set_algebra():
    a = VertexSet.of(6, [0, 2, 4])
    b = VertexSet.of(6, [1, 2])
    assert (a ^ b) ^ b == a
    assert (a | b).to_list() == [0, 1, 2, 4]
    assert (a & b).to_list() == [2]
    assert (~a).to_list() == [1, 3, 5]
    assert (a - b).to_list() == [0, 4]
    with pytest.raises(ValueError):
        VertexSet.of(3, [3])


def test_connected_induced_examples():
    g = path3()
    assert is_connected_induced(g, VertexSet.of(3, [1]))
    assert not is_connected_induced(g, VertexSet.of(3, [0, 2]))
    assert not is_connected_induced(g, VertexSet.of(3, []))
    g24, _ = build_24cell_skeleton()
    assert is_connected_induced(g24, g24.vertices)


def _random_graph(rng, n, p):
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def test_connectivity_against_union_find():
    rng = random.Random(11)
    for _ in range(1000):
        n = rng.randint(1, 20)
        g = _random_graph(rng, n, rng.random() * 0.4)
        s = rng.getrandbits(n)
        # union-find oracle
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        members = [v for v in range(n) if s >> v & 1]
        for u, v in g.edges():
            if s >> u & 1 and s >> v & 1:
                parent[find(u)] = find(v)
        roots = {find(v) for v in members}
        assert is_connected_induced(g, VertexSet(n, s)) == (len(roots) == 1)
        assert component_count(g.adj, s) == len(roots)


def test_bipartition_examples():
    bp = bipartition_classes(build_hypercube(4))
    assert isinstance(bp, Bipartition)
    assert sorted(len(c) for c in bp.classes) == [8, 8]
    tri = bipartition_classes(build_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert isinstance(tri, NotBipartite) and len(tri.odd_cycle) == 3
    assert isinstance(bipartition_classes(build_24cell_skeleton()[0]), NotBipartite)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2**32), st.floats(0, 0.5))
def test_bipartition_properties(n, seed, p):
    g = _random_graph(random.Random(seed), n, p)
    res = bipartition_classes(g)
    if isinstance(res, Bipartition):
        for cls in res.classes:
            assert not any(g.adj[v] & cls.bits for v in cls)
        assert (res.classes[0] | res.classes[1]) == g.vertices
        assert nx.is_bipartite(nx.Graph(g.edges()).subgraph(range(n))) or not g.edges()
    else:
        cyc = res.odd_cycle
        assert len(cyc) % 2 == 1
        for i in range(len(cyc)):
            assert g.has_edge(cyc[i], cyc[(i + 1) % len(cyc)])


def test_isomorphism_examples():
    q4 = build_hypercube(4)
    perm = list(range(16))
    random.Random(3).shuffle(perm)
    phi = is_isomorphic(q4, q4.relabel(perm))
    assert phi is not None
    cycle = build_graph(16, [(i, (i + 1) % 16) for i in range(16)])
    assert is_isomorphic(q4, cycle) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32), st.floats(0.1, 0.6))
def test_isomorphism_agrees_with_networkx(n, seed, p):
    rng = random.Random(seed)
    g1 = _random_graph(rng, n, p)
    g2 = _random_graph(rng, n, p) if rng.random() < 0.5 else g1.relabel(rng.sample(range(n), n))
    phi = is_isomorphic(g1, g2)
    h1, h2 = nx.Graph(), nx.Graph()
    h1.add_nodes_from(range(n))
    h2.add_nodes_from(range(n))
    h1.add_edges_from(g1.edges())
    h2.add_edges_from(g2.edges())
    assert (phi is not None) == nx.is_isomorphic(h1, h2)
    if phi is not None:
        assert sorted(tuple(sorted((phi[u], phi[v]))) for u, v in g1.edges()) == g2.edges()


def test_graph_json_and_dot_round_trip():
    g = build_graph(4, [(2, 3), (0, 1), (1, 2)], labels=["a", "b", "c", "d"])
    again = Graph.from_json(g.to_json())
    assert again == g and again.labels == g.labels
    assert '"edges": [[0, 1], [1, 2], [2, 3]]' in g.to_json()
    dot = g.to_dot()
    assert dot.index("0 -- 1") < dot.index("1 -- 2") < dot.index("2 -- 3")
