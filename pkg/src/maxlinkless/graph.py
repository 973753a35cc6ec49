"""Small labeled simple graphs backed by one adjacency bitmask per vertex.

Vertex sets are plain ``int`` bitmasks relative to a graph's vertex order, and
permutations are tuples ``p`` with ``p[i]`` the image of vertex ``i``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64


class GraphError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class Graph:
    """Immutable simple graph on at most 64 labeled vertices."""

    __slots__ = ("labels", "adj", "_index")

    def __init__(self, labels: Sequence[str], adj: Sequence[int]):
        labels = tuple(labels)
        adj = tuple(adj)
        n = len(labels)
        if not 1 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
        if len(set(labels)) != n:
            raise GraphError("vertex labels must be distinct")
        if len(adj) != n:
            raise GraphError("one adjacency row per vertex required")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full or row >> v & 1:
                raise GraphError(f"bad adjacency row for {labels[v]!r}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise GraphError("adjacency is not symmetric")
        self.labels = labels
        self.adj = adj
        self._index = {label: i for i, label in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown vertex {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        out = 0
        for label in labels:
            out |= 1 << self.index(label)
        return out

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def has_edge(self, u: str, v: str) -> bool:
        return bool(self.adj[self.index(u)] >> self.index(v) & 1)

    def neighbors(self, v: str) -> list[str]:
        return self.names(self.adj[self.index(v)])

    def edges(self) -> list[tuple[int, int]]:
        """Index pairs ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_labels(self) -> list[tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in self.edges()]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if not self.adj[u] >> v & 1]

    def neighborhood(self, s: int) -> int:
        """Vertices outside ``s`` adjacent to some vertex of ``s``."""
        out = 0
        for v in bits(s):
            out |= self.adj[v]
        return out & ~s

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.adj == other.adj

    def __hash__(self):
        return hash((self.labels, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def from_edges(labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
    labels = list(labels)
    if len(labels) > MAX_VERTICES:
        raise GraphError(f"at most {MAX_VERTICES} vertices supported")
    if len(set(labels)) != len(labels):
        raise GraphError("vertex labels must be distinct")
    index = {label: i for i, label in enumerate(labels)}
    adj = [0] * len(labels)
    for u, v in edges:
        for x in (u, v):
            if x not in index:
                raise GraphError(f"unknown vertex {x!r}")
        if u == v:
            raise GraphError(f"loop at {u!r}")
        i, j = index[u], index[v]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(labels, adj)


def complete_graph(n: int, prefix: str = "") -> Graph:
    labels = [f"{prefix}{i}" for i in range(n)]
    full = (1 << n) - 1
    return Graph(labels, [full ^ (1 << i) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    labels = [str(i) for i in range(n)]
    return from_edges(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])


def path_graph(n: int) -> Graph:
    labels = [str(i) for i in range(n)]
    return from_edges(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def complement(g: Graph) -> Graph:
    full = g.full
    return Graph(g.labels, [full ^ row ^ (1 << v) for v, row in enumerate(g.adj)])


def add_edge(g: Graph, u: str, v: str) -> Graph:
    i, j = g.index(u), g.index(v)
    if i == j:
        raise GraphError(f"loop at {u!r}")
    if g.adj[i] >> j & 1:
        raise GraphError(f"edge {u}{v} already present")
    adj = list(g.adj)
    adj[i] |= 1 << j
    adj[j] |= 1 << i
    return Graph(g.labels, adj)


def remove_edge(g: Graph, u: str, v: str) -> Graph:
    i, j = g.index(u), g.index(v)
    if not g.adj[i] >> j & 1:
        raise GraphError(f"edge {u}{v} not present")
    adj = list(g.adj)
    adj[i] &= ~(1 << j)
    adj[j] &= ~(1 << i)
    return Graph(g.labels, adj)


def _drop_bit(row: int, v: int) -> int:
    low = row & ((1 << v) - 1)
    return low | (row >> (v + 1) << v)


def delete_vertex(g: Graph, v: str) -> Graph:
    i = g.index(v)
    if g.n == 1:
        raise GraphError("cannot delete the only vertex")
    labels = g.labels[:i] + g.labels[i + 1:]
    adj = [_drop_bit(row, i) for k, row in enumerate(g.adj) if k != i]
    return Graph(labels, adj)


def contract_edge(g: Graph, u: str, v: str) -> Graph:
    """Contract edge ``uv``; the merged vertex keeps the lower-indexed endpoint's slot and label."""
    i, j = sorted((g.index(u), g.index(v)))
    if not g.adj[i] >> j & 1:
        raise GraphError(f"edge {u}{v} not present")
    adj = list(g.adj)
    merged = (adj[i] | adj[j]) & ~(1 << i) & ~(1 << j)
    adj[i] = merged
    for w in bits(merged):
        adj[w] |= 1 << i
    labels = g.labels[:j] + g.labels[j + 1:]
    adj = [_drop_bit(row & ~(1 << j), j) for k, row in enumerate(adj) if k != j]
    return Graph(labels, adj)


def induced_subgraph(g: Graph, s: int) -> Graph:
    keep = list(bits(s))
    pos = {v: k for k, v in enumerate(keep)}
    adj = []
    for v in keep:
        adj.append(sum(1 << pos[w] for w in bits(g.adj[v] & s)))
    return Graph([g.labels[v] for v in keep], adj)


def disjoint_union(g: Graph, h: Graph, suffix: str = "~") -> Graph:
    labels = list(g.labels)
    taken = set(labels)
    for label in h.labels:
        while label in taken:
            label += suffix
        labels.append(label)
        taken.add(label)
    adj = list(g.adj) + [row << g.n for row in h.adj]
    return Graph(labels, adj)


def component_of(g: Graph, start: int, within: int) -> int:
    """Vertices reachable from the vertex set ``start`` inside ``within``."""
    seen = start & within
    frontier = seen
    adj = g.adj
    while frontier:
        grow = 0
        for v in bits(frontier):
            grow |= adj[v]
        frontier = grow & within & ~seen
        seen |= frontier
    return seen


def is_connected(g: Graph, s: int | None = None) -> bool:
    """True iff the subgraph induced on the bitmask ``s`` (default: all) is connected."""
    if s is None:
        s = g.full
    if not s:
        raise GraphError("connectivity of the empty set is undefined")
    if s & ~g.full:
        raise GraphError("vertex set out of range")
    return component_of(g, s & -s, s) == s


def components(g: Graph) -> list[int]:
    out = []
    rest = g.full
    while rest:
        comp = component_of(g, rest & -rest, rest)
        out.append(comp)
        rest &= ~comp
    return out


def degree(g: Graph, v: str) -> int:
    return popcount(g.adj[g.index(v)])


def degrees(g: Graph) -> list[int]:
    return [popcount(row) for row in g.adj]


def triangles(g: Graph) -> list[int]:
    """All triangles as 3-bit masks, in lexicographic order of their sorted indices."""
    out = []
    for u in range(g.n):
        later = g.adj[u] >> (u + 1) << (u + 1)
        for v in bits(later):
            for w in bits(later & g.adj[v] >> (v + 1) << (v + 1)):
                out.append(1 << u | 1 << v | 1 << w)
    return out


def girth(g: Graph) -> int | None:
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for v in queue:
            for w in bits(g.adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    length = dist[v] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


# permutations ---------------------------------------------------------------

def check_permutation(p: Sequence[int], n: int) -> None:
    if len(p) != n or sorted(p) != list(range(n)):
        raise GraphError("not a permutation of the vertex indices")


def relabel(g: Graph, p: Sequence[int]) -> Graph:
    """Move vertex ``i`` (with its label) to position ``p[i]``."""
    check_permutation(p, g.n)
    labels = [""] * g.n
    adj = [0] * g.n
    for i in range(g.n):
        labels[p[i]] = g.labels[i]
        adj[p[i]] = sum(1 << p[w] for w in bits(g.adj[i]))
    return Graph(labels, adj)


def apply_permutation(g: Graph, p: Sequence[int]) -> tuple[int, ...]:
    """Adjacency rows of ``g`` after mapping vertex ``i`` to ``p[i]`` (labels stay put)."""
    check_permutation(p, g.n)
    adj = [0] * g.n
    for i in range(g.n):
        adj[p[i]] = sum(1 << p[w] for w in bits(g.adj[i]))
    return tuple(adj)


def is_automorphism(g: Graph, p: Sequence[int]) -> bool:
    check_permutation(p, g.n)
    for u in range(g.n):
        if sum(1 << p[w] for w in bits(g.adj[u])) != g.adj[p[u]]:
            return False
    return True


# canonical form ---------------------------------------------------------------

def _refine(g: Graph, colors: list[int]) -> list[int]:
    """Colour refinement to the coarsest equitable partition; colours are canonical ranks."""
    n_colors = len(set(colors))
    while True:
        sigs = []
        for v in range(g.n):
            counts: dict[int, int] = {}
            for w in bits(g.adj[v]):
                counts[colors[w]] = counts.get(colors[w], 0) + 1
            sigs.append((colors[v], tuple(sorted(counts.items()))))
        rank = {sig: k for k, sig in enumerate(sorted(set(sigs)))}
        colors = [rank[sig] for sig in sigs]
        if len(rank) == n_colors:
            return colors
        n_colors = len(rank)


def _form(g: Graph, order: Sequence[int]) -> bytes:
    # order[k] = vertex placed at position k
    pos = [0] * g.n
    for k, v in enumerate(order):
        pos[v] = k
    acc = 0
    for k, v in enumerate(order):
        row = sum(1 << pos[w] for w in bits(g.adj[v]))
        acc = acc << g.n | row
    nbytes = (g.n * g.n + 7) // 8
    return bytes([g.n]) + acc.to_bytes(nbytes, "big")


def canonical_form(g: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic (labels ignored).

    Colour refinement followed by exhaustive individualisation of the first
    smallest non-singleton cell; among mutually interchangeable twins only one
    branch is explored.
    """
    best: list[bytes] = []

    def search(colors: list[int]) -> None:
        colors = _refine(g, colors)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == g.n:
            form = _form(g, sorted(range(g.n), key=colors.__getitem__))
            if not best or form > best[0]:
                best[:] = [form]
            return
        target = min((len(cell), c) for c, cell in cells.items() if len(cell) > 1)[1]
        tried: list[int] = []
        for v in cells[target]:
            if any(_twins(g, v, u) for u in tried):
                continue
            tried.append(v)
            # individualised vertex sorts ahead of the rest of its cell
            search([2 * c + (0 if w == v else 1) for w, c in enumerate(colors)])

    search([0] * g.n)
    return best[0]


def _twins(g: Graph, u: int, v: int) -> bool:
    drop = ~(1 << u | 1 << v)
    return g.adj[u] & drop == g.adj[v] & drop


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


# Y-Delta moves ---------------------------------------------------------------

def fresh_label(g: Graph, base: str) -> str:
    label, k = base, 0
    while label in g._index:
        k += 1
        label = f"{base}{k}"
    return label


def delta_y(g: Graph, t: int | Iterable[str], label: str | None = None) -> Graph:
    """Replace triangle ``t`` by a new degree-3 vertex joined to its corners."""
    t = t if isinstance(t, int) else g.mask(t)
    corners = list(bits(t))
    if len(corners) != 3 or any(not g.adj[a] >> b & 1 for a, b in combinations(corners, 2)):
        raise GraphError("delta_y needs a triangle")
    if g.n >= MAX_VERTICES:
        raise GraphError(f"at most {MAX_VERTICES} vertices supported")
    new = g.n
    adj = list(g.adj)
    for a in corners:
        adj[a] = adj[a] & ~t | 1 << new
    adj.append(t)
    return Graph(g.labels + (label or fresh_label(g, "y"),), adj)


def y_delta(g: Graph, v: str) -> Graph:
    """Remove degree-3 vertex ``v`` and make its three neighbours pairwise adjacent."""
    i = g.index(v)
    nbrs = g.adj[i]
    if popcount(nbrs) != 3:
        raise GraphError(f"y_delta needs a degree-3 vertex, {v!r} has degree {popcount(nbrs)}")
    adj = list(g.adj)
    for a in bits(nbrs):
        adj[a] |= nbrs & ~(1 << a)
    h = Graph(g.labels, adj)
    return delete_vertex(h, v)


# text format -------------------------------------------------------------------

def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append("vertices: " + " ".join(g.labels))
    lines.extend(f"edge: {u} {v}" for u, v in g.edge_labels())
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def data_lines(text: str) -> Iterator[tuple[int, str, str]]:
    """Yield ``(lineno, key, rest)`` for non-blank, non-comment ``key: rest`` lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(lineno, f"expected 'key: value', got {line!r}")
        yield lineno, key.strip(), rest.strip()


def parse_graph(text: str) -> Graph:
    labels = None
    edges = []
    for lineno, key, rest in data_lines(text):
        if key == "vertices":
            if labels is not None:
                raise ParseError(lineno, "duplicate 'vertices' line")
            labels = rest.split()
            if len(set(labels)) != len(labels):
                raise ParseError(lineno, "duplicate vertex label")
            if not 1 <= len(labels) <= MAX_VERTICES:
                raise ParseError(lineno, f"vertex count must be in 1..{MAX_VERTICES}")
        elif key == "edge":
            if labels is None:
                raise ParseError(lineno, "'edge' before 'vertices'")
            ends = rest.split()
            if len(ends) != 2:
                raise ParseError(lineno, "edge needs exactly two endpoints")
            if ends[0] == ends[1]:
                raise ParseError(lineno, f"loop at {ends[0]!r}")
            for x in ends:
                if x not in labels:
                    raise ParseError(lineno, f"unknown vertex {x!r}")
            edges.append((ends[0], ends[1]))
        else:
            raise ParseError(lineno, f"unknown key {key!r}")
    if labels is None:
        raise ParseError(0, "missing 'vertices' line")
    return from_edges(labels, edges)
