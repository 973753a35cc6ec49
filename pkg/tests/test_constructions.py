import itertools
import random
from fractions import Fraction

import pytest

from maxlinkless import constructions as con
from maxlinkless.graph import (
    GraphError,
    add_edge,
    complete_graph,
    degrees,
    delete_vertex,
    from_edges,
    is_automorphism,
    is_isomorphic,
    path_graph,
    triangles,
)
from maxlinkless.minors import has_k6_minor, is_intrinsically_linked, verify_model, verify_partition_certificate

G_EDGES = ("AB AD BC BD CD A'B' A'D' B'C' B'D' C'D' AA' DD' AP BQ BT CP CR DS "
           "A'P B'Q B'T C'P C'R D'S PQ PR QR QT RS RT ST")


def split_pair(text):
    # two labels, each a letter optionally followed by a prime
    first = 2 if len(text) > 1 and text[1] == "'" else 1
    return text[:first], text[first:]


def test_g_edge_list():
    g = con.build_g()
    expected = from_edges(con.G_LABELS, [split_pair(e) for e in G_EDGES.split()])
    assert g == expected
    assert (g.n, g.m) == (13, 31)


def test_g_degrees():
    g = con.build_g()
    assert min(degrees(g)) == 4
    assert sum(degrees(g)) == 62


def test_sigma():
    g = con.build_g()
    s = con.sigma()
    assert s[g.index("A")] == g.index("A'")
    assert s[g.index("C'")] == g.index("C")
    assert s[g.index("Q")] == g.index("Q")
    assert [s[s[i]] for i in range(g.n)] == list(range(g.n))
    assert is_automorphism(g, s)


def test_orbits_of_g():
    g = con.build_g()
    table = con.non_edge_orbits(g, con.sigma())
    assert len(table.orbits) == 26
    assert sum(len(o) for o in table.orbits) == 47
    sizes = [len(o) for o in table.orbits]
    assert sizes.count(2) == 21 and sizes.count(1) == 5
    fixed = {con.pair_name(g, o[0]) for o in table.orbits if len(o) == 1}
    assert fixed == {"BB'", "CC'", "PS", "PT", "QS"}
    assert {con.pair_name(g, r) for r in table.representatives} == set(con.G_COVERAGE)


def test_identity_orbits():
    g = con.build_g()
    table = con.non_edge_orbits(g, list(range(g.n)))
    assert len(table.orbits) == 47


def test_orbits_need_automorphism():
    g = con.build_g()
    p = list(range(g.n))
    p[0], p[1] = 1, 0
    with pytest.raises(GraphError):
        con.non_edge_orbits(g, p)


def test_non_edge_table_matches_graph():
    g = con.build_g()
    listed = {tuple(sorted((g.index(a), g.index(b)))) for a, b in con.g_non_edges()}
    assert listed == set(g.non_edges())
    assert len(listed) == 47


def test_g_certificates_verify():
    g = con.build_g()
    certs = con.g_certificates()
    assert len(certs) == 8
    assert certs[0].parts == (("A", "B", "C", "D"), ("B'", "C'"), ("S", "T", "D'"), ("P", "A'"), ("Q",), ("R",))
    assert certs[7].parts == (("T", "B'", "C'"), ("C", "D"), ("A", "A'", "D'"), ("B", "Q"), ("R", "S"), ("P",))
    assert all(verify_partition_certificate(g, c).ok for c in certs)


def _representatives(g, check):
    rep = con.non_edge_orbits(g, con.sigma()).representative_of()
    return {con.pair_name(g, rep[p]) for p in check.eliminated}


def test_case_representatives():
    g = con.build_g()
    certs = con.g_certificates()
    assert _representatives(g, verify_partition_certificate(g, certs[3])) == {"BP", "PS", "PT", "BC'", "CS", "CT"}
    assert _representatives(g, verify_partition_certificate(g, certs[2])) == {"AC", "AR", "AS", "AT"}
    assert _representatives(g, verify_partition_certificate(g, certs[0])) == {
        "AB'", "AC'", "BB'", "BC'", "CC'", "BD'", "CD'"}


def test_coverage_table():
    _, coverage = con.verify_g_certificates()
    assert coverage == con.G_COVERAGE
    assert coverage["AR"] == {3, 5, 6}
    assert coverage["DQ"] == {2, 5, 7}
    assert coverage["BC'"] == {1, 4, 6, 7, 8}
    assert coverage["CC'"] == {1, 8}
    assert len(coverage) == 26


def test_coverage_gaps_reported():
    g = con.build_g()
    checks = [verify_partition_certificate(g, c) for c in con.g_certificates()[1:]]
    with pytest.raises(con.CoverageError) as info:
        con.coverage_check(checks, con.non_edge_orbits(g, con.sigma()))
    # case 1 is the only one eliminating these
    assert set(info.value.gaps) == {"AB'", "BB'"}


# clique sums -------------------------------------------------------------------

def test_triangle_sum_of_triangles():
    k3 = complete_graph(3)
    assert con.triangle_sum(k3, k3.labels, k3, k3.labels) == k3


def test_triangle_sum_g_g():
    g = con.build_g()
    h = con.triangle_sum(g, "PQR", g, "PQR")
    assert (h.n, h.m) == (23, 59)


def test_triangle_sum_counts_random():
    rng = random.Random(3)
    for _ in range(100):
        g1 = _random_with_triangle(rng)
        g2 = _random_with_triangle(rng)
        t1 = rng.choice(triangles(g1))
        t2 = rng.choice(triangles(g2))
        h = con.triangle_sum(g1, g1.names(t1), g2, g2.names(t2))
        assert h.n == g1.n + g2.n - 3
        assert h.m == g1.m + g2.m - 3


def _random_with_triangle(rng):
    while True:
        n = rng.randint(3, 9)
        labels = [str(i) for i in range(n)]
        g = from_edges(labels, [(a, b) for a, b in itertools.combinations(labels, 2) if rng.random() < 0.5])
        if triangles(g):
            return g


def test_triangle_sum_errors():
    k4 = complete_graph(4)
    with pytest.raises(GraphError):
        con.triangle_sum(k4, ["0", "1", "2"], path_graph(3), ["0", "1", "2"])
    with pytest.raises(GraphError):
        con.triangle_sum(k4, ["0", "1", "2"], k4, ["0", "1", "2"], corr={"0": "0", "1": "0", "2": "2"})


def test_triangle_sum_of_linkless_fixtures_stays_linkless():
    base = con.apex(con.stacked_triangulation(4))
    t = ["apex", "0", "1"]
    h = con.triangle_sum(base, t, base, t)
    assert is_intrinsically_linked(base) is None
    assert is_intrinsically_linked(h) is None
    octa = con.apex(con.octahedron())
    h = con.triangle_sum(octa, ["apex", "x+", "y+"], octa, ["apex", "x+", "y+"])
    assert h.n == 11
    assert is_intrinsically_linked(h) is None


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_family_counts(k):
    h, report = con.build_family(k)
    assert (h.n, h.m) == (3 + 10 * k, 3 + 28 * k)
    assert (report.n, report.m, report.k) == (h.n, h.m, k)
    assert report.excess_over_14n_5 == Fraction(-27, 5)
    assert report.at_least_2n and report.at_most_14n_5


def test_family_k1_is_g():
    assert con.build_family(1)[0] == con.build_g()


def test_default_glue_triangle_valid():
    con.check_glue_triangle(con.build_g(), con.DEFAULT_GLUE)


def test_bad_glue_triangle():
    # in K4 the fourth vertex touches all three corners
    with pytest.raises(GraphError):
        con.build_family(2, t=("0", "1", "2"), base=complete_graph(4))
    with pytest.raises(GraphError):
        con.build_family(0)


def test_h2_cross_copy_non_edges():
    h, _ = con.build_family(2)
    shared = set(con.DEFAULT_GLUE)
    cross = [(h.labels[u], h.labels[v]) for u, v in h.non_edges()
             if h.labels[u] not in shared and h.labels[v] not in shared
             and h.labels[u].endswith(".2") != h.labels[v].endswith(".2")]
    assert len(cross) == 100


# fixtures ------------------------------------------------------------------------

def test_apex_octahedron():
    g = con.apex(con.octahedron())
    assert (g.n, g.m) == (7, 18)
    assert delete_vertex(g, "apex") == con.octahedron()


def test_stacked_triangulation_counts():
    for n in range(3, 12):
        g = con.stacked_triangulation(n)
        assert (g.n, g.m) == (n, 3 * n - 6 if n > 3 else 3)


def test_stacked_triangulation_small():
    with pytest.raises(GraphError):
        con.stacked_triangulation(2)


def test_apex_octahedron_plus_edge():
    g = con.apex(con.octahedron())
    assert len(g.non_edges()) == 3
    assert has_k6_minor(g) is None
    for u, v in g.non_edges():
        h = add_edge(g, g.labels[u], g.labels[v])
        assert h.m == 19
        model = has_k6_minor(h)
        assert model is not None and verify_model(model)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_apex_stacked_is_linkless(n):
    g = con.apex(con.stacked_triangulation(n))
    assert g.m == 4 * (n + 1) - 10
    assert is_intrinsically_linked(g) is None


# reduction -----------------------------------------------------------------------

def test_reduce_path():
    assert is_isomorphic(con.reduce_low_degree(path_graph(3)), path_graph(2))


def test_reduce_k4_minus_edge():
    g = from_edges(list("abcd"), [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert is_isomorphic(con.reduce_low_degree(g), complete_graph(3))


def test_reduce_g_is_none():
    assert con.reduce_low_degree(con.build_g()) is None


def test_reduce_degree_three():
    g = con.build_family(1)[0]
    from maxlinkless.graph import delta_y
    h = delta_y(g, ["P", "Q", "R"])
    r = con.reduce_low_degree(h)
    assert is_isomorphic(r, g)


def test_reduce_properties_random():
    rng = random.Random(17)
    fired = 0
    for _ in range(300):
        n = rng.randint(2, 9)
        labels = [str(i) for i in range(n)]
        g = from_edges(labels, [(a, b) for a, b in itertools.combinations(labels, 2) if rng.random() < 0.4])
        r = con.reduce_low_degree(g)
        if r is None:
            assert min(degrees(g)) >= 4
            continue
        fired += 1
        assert r.n == g.n - 1
        assert r.m <= g.m + 1
    assert fired > 200


# counts ----------------------------------------------------------------------------

def test_count_report_g():
    rep = con.count_report(con.build_g())
    assert (rep.n, rep.m) == (13, 31)
    assert rep.at_least_2n and rep.at_most_14n_5 and rep.within_mader
    assert rep.versus_3n_minus_3 == -5


def test_count_report_k6():
    rep = con.count_report(complete_graph(6))
    assert rep.m == 15 and not rep.within_mader
