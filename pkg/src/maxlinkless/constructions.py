"""The 13-vertex maximally linkless graph G, its certificates and derived families."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import (
    Graph,
    GraphError,
    add_edge,
    bits,
    complement,
    delete_vertex,
    from_edges,
    is_automorphism,
    popcount,
    y_delta,
)
from .minors import CertificateCheck, PartitionCertificate, verify_partition_certificate

G_LABELS = ("A", "B", "C", "D", "A'", "B'", "C'", "D'", "P", "Q", "R", "S", "T")

# Non-edges of G grouped by orbit: the representative first, then its image
# under the prime swap when that differs.
NON_EDGE_TABLE = (
    (("A", "C"), ("A'", "C'")),
    (("A", "B'"), ("A'", "B")),
    (("A", "C'"), ("A'", "C")),
    (("A", "D'"), ("A'", "D")),
    (("A", "Q"), ("A'", "Q")),
    (("A", "R"), ("A'", "R")),
    (("A", "S"), ("A'", "S")),
    (("A", "T"), ("A'", "T")),
    (("B", "B'"),),
    (("B", "C'"), ("B'", "C")),
    (("B", "D'"), ("B'", "D")),
    (("B", "P"), ("B'", "P")),
    (("B", "R"), ("B'", "R")),
    (("B", "S"), ("B'", "S")),
    (("C", "C'"),),
    (("C", "D'"), ("C'", "D")),
    (("C", "Q"), ("C'", "Q")),
    (("C", "S"), ("C'", "S")),
    (("C", "T"), ("C'", "T")),
    (("D", "P"), ("D'", "P")),
    (("D", "Q"), ("D'", "Q")),
    (("D", "R"), ("D'", "R")),
    (("D", "T"), ("D'", "T")),
    (("P", "S"),),
    (("P", "T"),),
    (("Q", "S"),),
)

# Reference table: which certificate cases eliminate each orbit representative.
G_COVERAGE = {
    "AC": {3}, "AB'": {1}, "AC'": {1, 6}, "AD'": {6}, "AQ": {5}, "AR": {3, 5, 6},
    "AS": {3}, "AT": {3}, "BB'": {1}, "BC'": {1, 4, 6, 7, 8}, "BD'": {1, 6, 7, 8},
    "BP": {4}, "BR": {6}, "BS": {7}, "CC'": {1, 8}, "CD'": {1, 8}, "CQ": {7},
    "CS": {4}, "CT": {4, 8}, "DP": {2}, "DQ": {2, 5, 7}, "DR": {5}, "DT": {8},
    "PS": {2, 4}, "PT": {4}, "QS": {2, 7},
}

# The eight partitions; in each, the first two parts are the non-adjacent pair.
G_CERTIFICATES = (
    (("A", "B", "C", "D"), ("B'", "C'"), ("S", "T", "D'"), ("P", "A'"), ("Q",), ("R",)),
    (("D", "S"), ("P", "Q"), ("A", "B", "A'"), ("T", "B'"), ("C", "R"), ("C'", "D'")),
    (("C", "R", "S", "T"), ("A",), ("D", "C'", "D'"), ("B", "Q"), ("A'", "B'"), ("P",)),
    (("B", "S", "T"), ("P", "C'"), ("Q", "R", "B'"), ("A", "A'"), ("C", "D"), ("D'",)),
    (("A", "D"), ("Q", "R"), ("B", "S", "T"), ("C", "P"), ("A'", "B'"), ("C'", "D'")),
    (("A", "B"), ("R", "C'", "D'"), ("D", "S", "T"), ("C", "P"), ("A'", "B'"), ("Q",)),
    (("C", "D", "S"), ("Q", "B'"), ("A", "B", "A'"), ("R", "T"), ("C'", "D'"), ("P",)),
    (("T", "B'", "C'"), ("C", "D"), ("A", "A'", "D'"), ("B", "Q"), ("R", "S"), ("P",)),
)


def g_non_edges() -> list[tuple[str, str]]:
    return [pair for orbit in NON_EDGE_TABLE for pair in orbit]


def build_g() -> Graph:
    """G as the complement of its 47 non-edges."""
    return complement(from_edges(G_LABELS, g_non_edges()))


def sigma() -> tuple[int, ...]:
    """Swap A,B,C,D with A',B',C',D' and fix P,Q,R,S,T (indices in ``G_LABELS`` order)."""
    return prime_swap(G_LABELS)


def prime_swap(labels: Sequence[str]) -> tuple[int, ...]:
    """Permutation exchanging each label ``X`` with ``X'`` when both are present."""
    index = {label: i for i, label in enumerate(labels)}
    p = list(range(len(labels)))
    for label, i in index.items():
        twin = label[:-1] if label.endswith("'") else label + "'"
        if twin in index:
            p[i] = index[twin]
    return tuple(p)


def pair_name(g: Graph, pair: tuple[int, int]) -> str:
    return g.labels[pair[0]] + g.labels[pair[1]]


@dataclass
class OrbitTable:
    graph: Graph
    orbits: list  # list of sorted lists of index pairs; orbit[0] is the representative

    @property
    def representatives(self) -> list[tuple[int, int]]:
        return [orbit[0] for orbit in self.orbits]

    def representative_of(self) -> dict:
        return {pair: orbit[0] for orbit in self.orbits for pair in orbit}


def non_edge_orbits(g: Graph, p: Sequence[int]) -> OrbitTable:
    """Orbits of the non-edges of ``g`` under the cyclic group generated by ``p``."""
    if not is_automorphism(g, p):
        raise GraphError("permutation is not an automorphism")
    seen = set()
    orbits = []
    for pair in g.non_edges():
        if pair in seen:
            continue
        orbit = []
        cur = pair
        while cur not in orbit:
            orbit.append(cur)
            a, b = p[cur[0]], p[cur[1]]
            cur = (min(a, b), max(a, b))
        orbit.sort()
        seen.update(orbit)
        orbits.append(orbit)
    orbits.sort()
    return OrbitTable(g, orbits)


def g_certificates() -> list[PartitionCertificate]:
    return [PartitionCertificate(parts, case) for case, parts in enumerate(G_CERTIFICATES, 1)]


class CoverageError(ValueError):
    def __init__(self, gaps: list[str]):
        super().__init__("uncovered non-edge representatives: " + ", ".join(gaps))
        self.gaps = gaps


def coverage_check(checks: Sequence[CertificateCheck], table: OrbitTable) -> dict[str, set]:
    """Map each orbit representative (by name) to the certificate cases eliminating it."""
    g = table.graph
    rep = table.representative_of()
    coverage = {pair_name(g, r): set() for r in table.representatives}
    for check in checks:
        if not check.ok:
            raise GraphError(f"certificate {check.certificate.case} did not verify")
        for pair in check.eliminated:
            if pair not in rep:
                raise GraphError(f"certificate eliminates an existing edge {pair_name(g, pair)}")
            coverage[pair_name(g, rep[pair])].add(check.certificate.case)
    gaps = [name for name, cases in coverage.items() if not cases]
    if gaps:
        raise CoverageError(gaps)
    return coverage


def verify_g_certificates(g: Graph | None = None) -> tuple[list[CertificateCheck], dict]:
    g = g or build_g()
    checks = [verify_partition_certificate(g, c) for c in g_certificates()]
    return checks, coverage_check(checks, non_edge_orbits(g, sigma()))


# clique sums ---------------------------------------------------------------------

def _triangle_labels(g: Graph, t) -> list[str]:
    names = list(t)
    idx = sorted(g.index(x) for x in names)
    if len(set(idx)) != 3 or not all(
        g.adj[a] >> b & 1 for a, b in ((idx[0], idx[1]), (idx[0], idx[2]), (idx[1], idx[2]))
    ):
        raise GraphError(f"{names} is not a triangle")
    return [g.labels[i] for i in idx]


def triangle_sum(g1: Graph, t1, g2: Graph, t2, corr: dict | None = None, suffix: str = "*") -> Graph:
    """Glue ``g2`` onto ``g1`` by identifying triangle ``t2`` with ``t1``.

    ``corr`` maps each label of ``t1`` to a label of ``t2`` (default: by vertex
    order). Non-triangle vertices of ``g2`` get ``suffix`` appended until their
    labels are unused in ``g1``.
    """
    t1 = _triangle_labels(g1, t1)
    t2 = _triangle_labels(g2, t2)
    if corr is None:
        corr = dict(zip(t1, t2))
    if sorted(corr) != sorted(t1) or sorted(corr.values()) != sorted(t2):
        raise GraphError("triangle correspondence must be a bijection t1 -> t2")
    back = {b: a for a, b in corr.items()}
    taken = set(g1.labels)
    rename = {}
    for label in g2.labels:
        if label in back:
            rename[label] = back[label]
            continue
        new = label + suffix
        while new in taken:
            new += suffix
        taken.add(new)
        rename[label] = new
    labels = list(g1.labels) + [rename[x] for x in g2.labels if x not in back]
    edges = g1.edge_labels() + [(rename[u], rename[v]) for u, v in g2.edge_labels()]
    return from_edges(labels, edges)


@dataclass(frozen=True)
class CountReport:
    n: int
    m: int
    k: int | None = None

    @property
    def at_least_2n(self) -> bool:
        return self.m >= 2 * self.n

    @property
    def at_most_14n_5(self) -> bool:
        return 5 * self.m <= 14 * self.n

    @property
    def within_mader(self) -> bool:
        return self.m <= 4 * self.n - 10

    @property
    def excess_over_14n_5(self) -> Fraction:
        return self.m - Fraction(14, 5) * self.n

    @property
    def versus_3n_minus_3(self) -> int:
        """``m - (3n - 3)``; negative means fewer edges than the 3n-3 family."""
        return self.m - (3 * self.n - 3)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m, self.n)

    def lines(self) -> list[str]:
        out = [] if self.k is None else [f"k = {self.k}"]
        out += [
            f"n = {self.n}",
            f"m = {self.m}",
            f"m/n = {self.ratio} ({float(self.ratio):.4f})",
            f"m >= 2n ({2 * self.n}): {_yes(self.at_least_2n)}",
            f"m <= 14n/5 ({Fraction(14 * self.n, 5)}): {_yes(self.at_most_14n_5)}",
            f"m - 14n/5 = {self.excess_over_14n_5}",
            f"m <= 4n-10 ({4 * self.n - 10}): {_yes(self.within_mader)}",
            f"m - (3n-3) = {self.versus_3n_minus_3}",
        ]
        return out


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def count_report(g: Graph, k: int | None = None) -> CountReport:
    return CountReport(g.n, g.m, k)


DEFAULT_GLUE = ("P", "Q", "R")


def check_glue_triangle(g: Graph, t) -> None:
    """Reject a gluing triangle whose three corners have a common outside neighbour."""
    labels = _triangle_labels(g, t)
    common = g.full
    for x in labels:
        common &= g.adj[g.index(x)]
    if common:
        raise GraphError(
            f"vertices {g.names(common)} are adjacent to every corner of {''.join(labels)}"
        )


def build_family(k: int, t: Sequence[str] = DEFAULT_GLUE, base: Graph | None = None) -> tuple[Graph, CountReport]:
    """``k`` copies of G sharing the single triangle ``t``.

    Copy ``j >= 2`` has its non-triangle labels suffixed with ``.j``.
    """
    if k < 1:
        raise GraphError("need at least one copy")
    g = base or build_g()
    check_glue_triangle(g, t)
    h = g
    for j in range(2, k + 1):
        h = triangle_sum(h, t, g, t, suffix=f".{j}")
    return h, count_report(h, k)


# fixtures -------------------------------------------------------------------------

def apex(g: Graph, label: str = "apex") -> Graph:
    if g.n >= 64:
        raise GraphError("at most 64 vertices supported")
    while label in g.labels:
        label += "+"
    adj = [row | 1 << g.n for row in g.adj] + [g.full]
    return Graph(g.labels + (label,), adj)


def stacked_triangulation(n: int) -> Graph:
    """Maximal planar graph on ``n`` vertices, grown by inserting vertices into faces.

    Faces are tracked combinatorially, starting from the two faces of a
    triangle; vertex ``v`` goes into the face created most recently.
    """
    if n < 3:
        raise GraphError("need at least 3 vertices")
    labels = [str(i) for i in range(n)]
    edges = [("0", "1"), ("1", "2"), ("0", "2")]
    faces = [(0, 1, 2), (0, 1, 2)]
    for v in range(3, n):
        a, b, c = faces.pop()
        edges += [(labels[v], labels[a]), (labels[v], labels[b]), (labels[v], labels[c])]
        faces += [(a, b, v), (b, c, v), (a, c, v)]
    return from_edges(labels, edges)


def octahedron() -> Graph:
    labels = ["x+", "x-", "y+", "y-", "z+", "z-"]
    opposite = {("x+", "x-"), ("y+", "y-"), ("z+", "z-")}
    edges = [(u, v) for i, u in enumerate(labels) for v in labels[i + 1:] if (u, v) not in opposite]
    return from_edges(labels, edges)


def reduce_low_degree(g: Graph) -> Graph | None:
    """Remove one vertex of degree at most 3 by a linklessness-preserving move.

    Degree 0 or 1: delete it. Degree 2: delete it and join its neighbours.
    Degree 3: Y-Delta at it. The lowest-degree vertex (first in order) is
    used; ``None`` when every degree is at least 4.
    """
    degs = [popcount(r) for r in g.adj]
    if g.n == 1 or min(degs) > 3:
        return None
    v = min(range(g.n), key=lambda i: (degs[i], i))
    label = g.labels[v]
    if degs[v] <= 1:
        return delete_vertex(g, label)
    if degs[v] == 2:
        a, b = (g.labels[i] for i in bits(g.adj[v]))
        h = delete_vertex(g, label)
        return h if h.has_edge(a, b) else add_edge(h, a, b)
    return y_delta(g, label)
