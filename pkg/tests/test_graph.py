import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxlinkless.constructions import apex, build_g, octahedron, sigma
from maxlinkless.graph import (
    Graph,
    GraphError,
    ParseError,
    add_edge,
    canonical_form,
    complement,
    complete_graph,
    contract_edge,
    cycle_graph,
    degree,
    delete_vertex,
    delta_y,
    format_graph,
    from_edges,
    induced_subgraph,
    is_automorphism,
    is_connected,
    is_isomorphic,
    parse_graph,
    path_graph,
    relabel,
    remove_edge,
    triangles,
    y_delta,
)
from oracles import brute_isomorphic


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    labels = [f"v{i}" for i in range(n)]
    return from_edges(labels, [(labels[u], labels[v]) for (u, v), c in zip(pairs, chosen) if c])


def random_graph(rng, n, p=0.5):
    labels = [str(i) for i in range(n)]
    return from_edges(labels, [(a, b) for a, b in itertools.combinations(labels, 2) if rng.random() < p])


# construction -------------------------------------------------------------

def test_triangle_from_edges():
    g = from_edges(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    assert (g.n, g.m) == (3, 3)


def test_single_vertex():
    g = from_edges(["a"], [])
    assert (g.n, g.m) == (1, 0)


def test_duplicate_edges_collapse():
    g = from_edges(["a", "b"], [("a", "b"), ("b", "a")])
    assert g.m == 1


@pytest.mark.parametrize("labels,edges", [
    (["a", "b"], [("a", "z")]),
    (["a", "b"], [("a", "a")]),
    (["a", "a"], []),
    ([str(i) for i in range(65)], []),
    ([], []),
])
def test_from_edges_errors(labels, edges):
    with pytest.raises(GraphError):
        from_edges(labels, edges)


def test_g_has_31_edges():
    assert build_g().m == 31


# complement and edits -----------------------------------------------------

def test_complement_of_k6_is_edgeless():
    assert complement(complete_graph(6)).m == 0


def test_complement_of_g_has_47_edges():
    assert complement(build_g()).m == 47


@given(graphs())
def test_complement_involution(g):
    assert complement(complement(g)) == g


@given(graphs(), st.data())
def test_add_then_remove(g, data):
    non = g.non_edges()
    if not non:
        return
    u, v = data.draw(st.sampled_from(non))
    a, b = g.labels[u], g.labels[v]
    h = add_edge(g, a, b)
    assert h.m == g.m + 1
    assert remove_edge(h, a, b) == g


def test_add_existing_edge_fails():
    with pytest.raises(GraphError):
        add_edge(complete_graph(3), "0", "1")


def test_contract_triangle_edge():
    g = contract_edge(complete_graph(3), "0", "1")
    assert (g.n, g.m) == (2, 1)
    assert g.labels == ("0", "2")


def test_contract_keeps_lower_index_label():
    g = path_graph(3)
    assert contract_edge(g, "1", "0").labels == ("0", "2")


def test_contract_missing_edge_fails():
    with pytest.raises(GraphError):
        contract_edge(path_graph(3), "0", "2")


def test_delete_apex_of_octahedron():
    g = delete_vertex(apex(octahedron()), "apex")
    assert g == octahedron()
    assert g.m == 12


def test_delete_missing_vertex_fails():
    with pytest.raises(GraphError):
        delete_vertex(path_graph(3), "x")


def test_add_pt_to_g():
    from maxlinkless.minors import has_k6_minor
    h = add_edge(build_g(), "P", "T")
    assert h.m == 32
    assert has_k6_minor(h) is not None


@given(graphs(), st.data())
def test_edits_stay_simple(g, data):
    if g.m:
        u, v = data.draw(st.sampled_from(g.edges()))
        h = contract_edge(g, g.labels[u], g.labels[v])
        assert h.n == g.n - 1
        _check_simple(h)
    if g.n > 1:
        x = data.draw(st.sampled_from(g.labels))
        h = delete_vertex(g, x)
        assert h.m == g.m - degree(g, x)
        _check_simple(h)


def _check_simple(g):
    for v in range(g.n):
        assert not g.adj[v] >> v & 1
        for u in range(g.n):
            assert (g.adj[v] >> u & 1) == (g.adj[u] >> v & 1)
    assert g.m <= g.n * (g.n - 1) // 2


# connectivity, degree, triangles ------------------------------------------

def test_is_connected_examples():
    g = build_g()
    assert is_connected(g, g.mask(["Q"]))
    assert is_connected(g, g.mask(["A", "B", "C", "D"]))
    assert not is_connected(g, g.mask(["A", "C"]))


def test_is_connected_empty_set_fails():
    with pytest.raises(GraphError):
        is_connected(build_g(), 0)


def test_degrees_of_g():
    g = build_g()
    assert degree(g, "T") == 5
    assert set(g.neighbors("T")) == {"B", "Q", "R", "S", "B'"}
    assert degree(g, "P") == 6
    assert set(g.neighbors("P")) == {"A", "C", "A'", "C'", "Q", "R"}
    assert sum(degree(g, v) for v in g.labels) == 62


def test_triangles():
    k3 = complete_graph(3)
    assert triangles(k3) == [0b111]
    assert triangles(from_edges(["a", "b"], [])) == []
    g = build_g()
    assert g.mask(["P", "Q", "R"]) in triangles(g)


def test_triangles_k5_count():
    assert len(triangles(complete_graph(5))) == 10


# automorphisms and canonical form -----------------------------------------

def test_identity_is_automorphism():
    g = build_g()
    assert is_automorphism(g, list(range(g.n)))


def test_sigma_and_transposition():
    g = build_g()
    assert is_automorphism(g, sigma())
    swap = list(range(g.n))
    swap[0], swap[1] = 1, 0
    assert not is_automorphism(g, swap)


@given(graphs(), st.randoms(use_true_random=False))
def test_automorphism_iff_relabel_identical(g, rnd):
    p = list(range(g.n))
    rnd.shuffle(p)
    assert is_automorphism(g, p) == (relabel(g, p).adj == g.adj)


def test_canonical_form_c5():
    g = cycle_graph(5)
    h = relabel(g, [2, 4, 1, 3, 0])
    assert canonical_form(g) == canonical_form(h)
    assert canonical_form(g) != canonical_form(path_graph(5))


def test_delta_y_k6_triangles_agree():
    k6 = complete_graph(6)
    ts = triangles(k6)
    assert canonical_form(delta_y(k6, ts[0])) == canonical_form(delta_y(k6, ts[-1]))


@settings(max_examples=300)
@given(graphs(), st.randoms(use_true_random=False))
def test_canonical_form_relabel_invariant(g, rnd):
    p = list(range(g.n))
    rnd.shuffle(p)
    assert canonical_form(relabel(g, p)) == canonical_form(g)


def test_canonical_form_matches_brute_force():
    rng = random.Random(7)
    for _ in range(150):
        n = rng.randint(3, 6)
        g, h = random_graph(rng, n), random_graph(rng, n)
        assert is_isomorphic(g, h) == brute_isomorphic(g, h)


def test_canonical_form_regular_graphs():
    # vertex-transitive pairs where refinement alone cannot split anything
    prism = from_edges(list("abcdef"), [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"),
                                        ("f", "d"), ("a", "d"), ("b", "e"), ("c", "f")])
    k33 = from_edges(list("abcdef"), [(x, y) for x in "abc" for y in "def"])
    assert not is_isomorphic(prism, k33)
    c6 = cycle_graph(6)
    two_triangles = from_edges(list("abcdef"), [("a", "b"), ("b", "c"), ("c", "a"),
                                                ("d", "e"), ("e", "f"), ("f", "d")])
    assert not is_isomorphic(c6, two_triangles)


# Y-Delta -------------------------------------------------------------------

def test_delta_y_on_k6():
    k6 = complete_graph(6)
    h = delta_y(k6, ["0", "1", "2"])
    assert (h.n, h.m) == (7, 15)
    back = y_delta(h, h.labels[-1])
    assert is_isomorphic(back, k6)


def test_y_delta_with_adjacent_neighbours():
    # star centre plus one edge among the leaves
    g = from_edges(list("cxyz"), [("c", "x"), ("c", "y"), ("c", "z"), ("x", "y")])
    h = y_delta(g, "c")
    assert h.m == g.m - 1


def test_y_delta_degree_error():
    with pytest.raises(GraphError):
        y_delta(complete_graph(5), "0")


def test_delta_y_not_triangle():
    with pytest.raises(GraphError):
        delta_y(path_graph(3), ["0", "1", "2"])


@given(graphs(), st.data())
def test_delta_y_invariants(g, data):
    ts = triangles(g)
    if not ts or g.n >= 64:
        return
    t = data.draw(st.sampled_from(ts))
    h = delta_y(g, t)
    assert (h.n, h.m) == (g.n + 1, g.m)
    assert bin(h.adj[-1]).count("1") == 3


# text format ---------------------------------------------------------------

@given(graphs())
def test_round_trip(g):
    assert parse_graph(format_graph(g, ["comment"])) == g


def test_format_is_sorted():
    g = from_edges(["x", "y", "z"], [("z", "x"), ("y", "x")])
    assert format_graph(g) == "vertices: x y z\nedge: x y\nedge: x z\n"


@pytest.mark.parametrize("text,line", [
    ("edge: a b\n", 1),
    ("vertices: a b\nedge: a c\n", 2),
    ("# c\nvertices: a b\nedge: a\n", 3),
    ("vertices: a b\nfoo: a b\n", 2),
    ("vertices: a a\n", 1),
    ("", None),
])
def test_parse_errors_have_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    if line is not None:
        assert info.value.lineno == line


def test_induced_subgraph():
    g = build_g()
    h = induced_subgraph(g, g.mask(["P", "Q", "R"]))
    assert (h.n, h.m) == (3, 3)
    assert isinstance(h, Graph)
