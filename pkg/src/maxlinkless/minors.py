"""Graph minor search, minor-model checking and partition certificates.

A minor model of a pattern ``H`` in a host ``G`` assigns every vertex of ``H``
a nonempty connected branch set of ``G``; branch sets are disjoint and every
edge of ``H`` is realised by a host edge between the two branch sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .graph import (
    Graph,
    GraphError,
    bits,
    canonical_form,
    complete_graph,
    component_of,
    data_lines,
    delta_y,
    popcount,
    ParseError,
    triangles,
    y_delta,
)


@dataclass(frozen=True)
class MinorModel:
    host: Graph
    pattern: Graph
    branch_sets: dict  # pattern label -> host vertex bitmask

    def sets_by_label(self) -> dict[str, list[str]]:
        return {x: self.host.names(s) for x, s in self.branch_sets.items()}

    def contracted_mask(self) -> int:
        out = 0
        for s in self.branch_sets.values():
            out |= s
        return out


def verify_model(model: MinorModel) -> bool:
    host, pattern = model.host, model.pattern
    if set(model.branch_sets) != set(pattern.labels):
        raise GraphError("branch sets must be keyed by the pattern's vertex labels")
    used = 0
    for s in model.branch_sets.values():
        if s & ~host.full or s < 0:
            raise GraphError("branch set references a vertex outside the host")
        if not s or s & used:
            return False
        used |= s
        if component_of(host, s & -s, s) != s:
            return False
    for x, y in pattern.edge_labels():
        if not host.neighborhood(model.branch_sets[x]) & model.branch_sets[y]:
            return False
    return True


# pattern symmetry -------------------------------------------------------------

def _find_automorphism(g: Graph, fixed: Sequence[int], x: int, y: int) -> bool:
    """Is there an automorphism fixing ``fixed`` pointwise and sending ``x`` to ``y``?"""
    deg = [popcount(r) for r in g.adj]
    if deg[x] != deg[y]:
        return False
    image = {v: v for v in fixed}
    image[x] = y
    for a, b in image.items():
        for c, d in image.items():
            if (g.adj[a] >> c & 1) != (g.adj[b] >> d & 1):
                return False
    rest = [v for v in range(g.n) if v not in image]
    used = set(image.values())

    def extend() -> bool:
        if len(image) == g.n:
            return True
        # most constrained vertex next
        v = max((u for u in rest if u not in image),
                key=lambda u: sum(1 for w in image if g.adj[u] >> w & 1))
        for cand in range(g.n):
            if cand in used or deg[cand] != deg[v]:
                continue
            if all((g.adj[v] >> w & 1) == (g.adj[cand] >> image[w] & 1) for w in image):
                image[v] = cand
                used.add(cand)
                if extend():
                    return True
                del image[v]
                used.discard(cand)
        return False

    return extend()


class _OpeningRule:
    """Which unopened pattern vertices are worth opening, given the opened set.

    Opening ``x`` and opening ``y`` lead to equivalent searches when an
    automorphism of the pattern fixes every opened vertex and maps ``x`` to
    ``y``; only one vertex per such orbit is tried.
    """

    def __init__(self, pattern: Graph, preference: Sequence[int]):
        self.pattern = pattern
        self.rank = {v: k for k, v in enumerate(preference)}
        self.cache: dict[int, list[int]] = {}

    def __call__(self, opened: int) -> list[int]:
        reps = self.cache.get(opened)
        if reps is None:
            g = self.pattern
            fixed = list(bits(opened))
            reps = []
            for v in sorted(set(range(g.n)) - set(fixed), key=self.rank.__getitem__):
                if not any(_find_automorphism(g, fixed, r, v) for r in reps):
                    reps.append(v)
            self.cache[opened] = reps
        return reps


# search -------------------------------------------------------------------------

@lru_cache(maxsize=256)
def separation_order(host: Graph) -> list[int]:
    """Vertex order keeping few decided vertices with undecided neighbours.

    Exact minimum vertex separation by dynamic programming over subsets for
    small hosts, greedy beyond that; ties go to higher degree.
    """
    n = host.n
    adj = host.adj
    deg = [popcount(r) for r in adj]
    if n > 16:
        order, placed = [], 0
        for _ in range(n):
            def cost(v):
                s = placed | 1 << v
                front = sum(1 for u in bits(s) if adj[u] & ~s)
                return (front, -popcount(adj[v] & placed), -deg[v], v)
            v = min((u for u in range(n) if not placed >> u & 1), key=cost)
            order.append(v)
            placed |= 1 << v
        return order
    full = (1 << n) - 1
    outside = [0] * (1 << n)
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for s in range(1, 1 << n):
        front = 0
        for u in bits(s):
            if adj[u] & ~s & full:
                front += 1
        outside[s] = front
        value = None
        for v in sorted(bits(s), key=lambda u: (deg[u], -u)):
            cand = max(best[s & ~(1 << v)], front)
            if value is None or cand < value:
                value, choice[s] = cand, v
        best[s] = value
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    return order


def _schedule(host: Graph) -> tuple[list[int], list[int], list[int]]:
    """Vertex order plus, per step ``k``, the frontier and undecided masks.

    The frontier after ``k`` steps is the set of decided vertices that still
    have an undecided neighbour.
    """
    order = list(separation_order(host))
    decided = 0
    frontier, undecided = [], []
    for k in range(host.n + 1):
        frontier.append(sum(1 << u for u in bits(decided) if host.adj[u] & ~decided & host.full))
        undecided.append(host.full & ~decided)
        if k < host.n:
            decided |= 1 << order[k]
    return order, frontier, undecided


class _LabeledSearch:
    """Depth-first branch-set assignment over the host vertices in a fixed order.

    Each host vertex joins an open branch set, opens a new one, or stays
    unused. Unused vertices are confined to host components carrying no
    branch set: an unused vertex next to a branch set could always be absorbed
    into it, so nothing is lost.

    Failed partial states are remembered by signature: the labels of decided
    vertices that still have undecided neighbours, how each branch set splits
    into components on that frontier, and the pattern edges already realised.
    Two states with equal signatures have the same completions.
    """

    def __init__(self, pattern: Graph, host: Graph):
        self.pattern = pattern
        self.host = host
        p = pattern.n
        self.p = p
        self.order, self.frontier, self.undecided = _schedule(host)
        p_deg = [popcount(r) for r in pattern.adj]
        self.p_deg = p_deg
        self.opening = _OpeningRule(pattern, sorted(range(p), key=lambda x: (-p_deg[x], x)))
        self.p_edges = pattern.edges()
        self.all_edges = (1 << len(self.p_edges)) - 1
        self.edge_bit = [[0] * p for _ in range(p)]
        for i, (x, y) in enumerate(self.p_edges):
            self.edge_bit[x][y] = self.edge_bit[y][x] = 1 << i
        self.p_nbrs = [list(bits(r)) for r in pattern.adj]
        self.sets = [0] * p
        self.opened = 0
        self.unused = 0
        self.realized = 0
        self.failed: set = set()
        self.nodes = 0

    def run(self) -> dict | None:
        if self._search(0):
            return {self.pattern.labels[x]: s for x, s in enumerate(self.sets)}
        return None

    def _components(self, s: int) -> list[int]:
        out = []
        while s:
            comp = component_of(self.host, s & -s, s)
            out.append(comp)
            s &= ~comp
        return out

    def _signature(self, k: int):
        """Signature of the state after deciding ``order[:k]``; ``None`` if hopeless."""
        front = self.frontier[k]
        free = self.undecided[k]
        sets = self.sets
        host_adj = self.host.adj
        shape = []
        closed = 0
        for x in bits(self.opened):
            comps = self._components(sets[x])
            if len(comps) > 1:
                # a component cut off from the undecided vertices stays cut off
                if any(not c & front for c in comps):
                    return None
                # the pieces must still be joinable through undecided vertices
                s = sets[x]
                if component_of(self.host, s & -s, s | free) & s != s:
                    return None
            elif not comps[0] & front:
                closed |= 1 << x
            shape.append(tuple(sorted(c & front for c in comps)))
        missing = self.all_edges & ~self.realized
        if missing:
            if self.p - popcount(self.opened) > popcount(free):
                return None
            for i in bits(missing):
                x, y = self.p_edges[i]
                if (closed >> x | closed >> y) & 1:
                    return None
                # both ends need room to meet inside the undecided part
                if self.opened >> x & 1 and self.opened >> y & 1:
                    tx = 0
                    for v in bits(sets[x] & front):
                        tx |= host_adj[v]
                    ty = 0
                    for v in bits(sets[y] & front):
                        ty |= host_adj[v]
                    if not (tx & free and ty & free):
                        return None
        return (k, self.unused & front, self.opened, self.realized, tuple(shape))

    def _search(self, k: int) -> bool:
        self.nodes += 1
        host = self.host
        if k == host.n:
            return (
                self.opened == (1 << self.p) - 1
                and self.realized == self.all_edges
                and all(len(self._components(s)) == 1 for s in self.sets)
            )
        sig = self._signature(k)
        if sig is None or sig in self.failed:
            return False
        v = self.order[k]
        bit = 1 << v
        nbrs = host.adj[v]
        sets = self.sets
        if not nbrs & self.unused:
            choices = [x for x in bits(self.opened) if sets[x] & self.frontier[k] or not sets[x]]
            # sets already touching v first
            choices.sort(key=lambda x: (not nbrs & sets[x], -self.p_deg[x], x))
            for x in choices:
                if self._place(k, x, bit, nbrs):
                    return True
            for x in self.opening(self.opened):
                self.opened |= 1 << x
                found = self._place(k, x, bit, nbrs)
                self.opened &= ~(1 << x)
                if found:
                    return True
        assigned = 0
        for s in sets:
            assigned |= s
        if not nbrs & assigned:
            self.unused |= bit
            if self._search(k + 1):
                return True
            self.unused &= ~bit
        self.failed.add(sig)
        return False

    def _place(self, k: int, x: int, bit: int, nbrs: int) -> bool:
        saved = self.realized
        for y in self.p_nbrs[x]:
            if self.sets[y] & nbrs:
                self.realized |= self.edge_bit[x][y]
        self.sets[x] |= bit
        if self._search(k + 1):
            return True
        self.sets[x] &= ~bit
        self.realized = saved
        return False


def _spanning_embedding(pattern: Graph, q_adj: Sequence[int], opening: _OpeningRule) -> list[int] | None:
    """Bijection ``f`` from pattern vertices to quotient blocks preserving pattern edges.

    Blocks receive preimages one at a time. A block's preimage is only tried
    among orbit representatives of the pattern automorphisms fixing every
    pattern vertex already placed, since those automorphisms carry solutions
    to solutions without disturbing the placed part.
    """
    p = pattern.n
    p_adj = pattern.adj
    q_deg = [popcount(r) for r in q_adj]
    p_deg = [popcount(r) for r in p_adj]
    blocks = []
    placed = 0
    for _ in range(p):
        b = max((c for c in range(p) if not placed >> c & 1),
                key=lambda c: (popcount(q_adj[c] & placed), -q_deg[c], -c))
        blocks.append(b)
        placed |= 1 << b
    pre = [-1] * p  # block -> pattern vertex
    every = (1 << p) - 1
    start = [sum(1 << x for x in range(p) if p_deg[x] <= q_deg[b]) for b in range(p)]

    def extend(i: int, used: int, dom: list[int]) -> bool:
        if i == p:
            return True
        b = blocks[i]
        for x in opening(used):
            if not dom[b] >> x & 1:
                continue
            nxt = list(dom)
            ok = True
            for c in blocks[i + 1:]:
                d = nxt[c] & ~(1 << x)
                if not q_adj[b] >> c & 1:
                    # pattern neighbours of x need a block adjacent to b
                    d &= every & ~p_adj[x]
                if not d:
                    ok = False
                    break
                nxt[c] = d
            if not ok:
                continue
            pre[b] = x
            if extend(i + 1, used | 1 << x, nxt):
                return True
        pre[b] = -1
        return False

    if not all(start) or not extend(0, 0, start):
        return None
    image = [0] * p
    for b, x in enumerate(pre):
        image[x] = b
    return image


class _PartitionSearch:
    """Enumerate partitions of the host into exactly ``p`` connected blocks.

    Blocks are unlabeled while they grow; a finished partition is accepted when
    the pattern embeds as a spanning subgraph of its quotient graph. A block
    whose neighbours are all decided is final, so its number of neighbouring
    blocks must already reach the pattern's minimum degree.
    """

    def __init__(self, pattern: Graph, host: Graph):
        self.pattern = pattern
        self.host = host
        self.p = pattern.n
        self.order, self.frontier, self.undecided = _schedule(host)
        p_deg = [popcount(r) for r in pattern.adj]
        self.min_deg = min(p_deg)
        self.sorted_deg = sorted(p_deg)
        self.opening = _OpeningRule(pattern, sorted(range(self.p), key=lambda x: (-p_deg[x], x)))
        self.blocks: list[int] = []
        self.unused = 0
        self.nodes = 0
        self.found = None
        self.rejected: set = set()

    def run(self) -> dict | None:
        if self._search(0):
            return self.found
        return None

    def _viable(self, k: int) -> bool:
        front = self.frontier[k]
        free = self.undecided[k]
        if self.p - len(self.blocks) > popcount(free):
            return False
        host = self.host
        for s in self.blocks:
            if not s & front:
                # final block: connected, and enough neighbouring blocks
                if component_of(host, s & -s, s) != s:
                    return False
                touch = host.neighborhood(s)
                if sum(1 for t in self.blocks if t & touch) < self.min_deg:
                    return False
            elif component_of(host, s & -s, s | free) & s != s:
                return False
        return True

    def _quotient(self) -> list[int]:
        host = self.host
        blocks = self.blocks
        q = []
        for s in blocks:
            touch = host.neighborhood(s)
            q.append(sum(1 << j for j, t in enumerate(blocks) if t & touch))
        return q

    def _accept(self) -> bool:
        if len(self.blocks) != self.p:
            return False
        host = self.host
        if any(component_of(host, s & -s, s) != s for s in self.blocks):
            return False
        q = self._quotient()
        key = tuple(q)
        if key in self.rejected:
            return False
        q_deg = sorted(popcount(r) for r in q)
        if any(a < b for a, b in zip(q_deg, self.sorted_deg)):
            image = None
        else:
            image = _spanning_embedding(self.pattern, q, self.opening)
        if image is None:
            self.rejected.add(key)
            return False
        self.found = {self.pattern.labels[x]: self.blocks[image[x]] for x in range(self.p)}
        return True

    def _search(self, k: int) -> bool:
        self.nodes += 1
        if k == self.host.n:
            return self._accept()
        if not self._viable(k):
            return False
        v = self.order[k]
        bit = 1 << v
        nbrs = self.host.adj[v]
        blocks = self.blocks
        front = self.frontier[k]
        if not nbrs & self.unused:
            for i in sorted(range(len(blocks)), key=lambda j: not nbrs & blocks[j]):
                if not blocks[i] & front:
                    continue
                blocks[i] |= bit
                if self._search(k + 1):
                    return True
                blocks[i] &= ~bit
            if len(blocks) < self.p:
                blocks.append(bit)
                if self._search(k + 1):
                    return True
                blocks.pop()
        assigned = 0
        for s in blocks:
            assigned |= s
        if not nbrs & assigned:
            self.unused |= bit
            if self._search(k + 1):
                return True
            self.unused &= ~bit
        return False

STRATEGIES = ("auto", "labeled", "partition")


def find_minor(pattern: Graph, host: Graph, strategy: str = "auto") -> MinorModel | None:
    """Complete minor search; ``None`` proves ``pattern`` is not a minor of ``host``.

    ``labeled`` assigns pattern vertices while branch sets grow and suits
    complete patterns and large hosts; ``partition`` enumerates unlabeled
    connected partitions and matches the pattern against each quotient, which
    pays off on small hosts when the pattern has few symmetries. ``auto``
    picks between them. The returned model always passes :func:`verify_model`.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if pattern.n > host.n or pattern.m > host.m:
        return None
    if strategy == "auto":
        complete = pattern.m == pattern.n * (pattern.n - 1) // 2
        strategy = "labeled" if complete or host.n > 16 else "partition"
    search = _LabeledSearch if strategy == "labeled" else _PartitionSearch
    sets = search(pattern, host).run()
    if sets is None:
        return None
    model = MinorModel(host, pattern, sets)
    assert verify_model(model)
    return model


K6 = complete_graph(6, prefix="k")


def has_k6_minor(g: Graph) -> MinorModel | None:
    return find_minor(K6, g)


# partition certificates -----------------------------------------------------------

class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionCertificate:
    """Six-part partition whose first two parts are the one non-adjacent pair."""

    parts: tuple  # six tuples of vertex labels
    case: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        if len(self.parts) != 6:
            raise CertificateError(f"a certificate has 6 parts, got {len(self.parts)}")
        if any(not p for p in self.parts):
            raise CertificateError("certificate parts must be nonempty")

    def masks(self, g: Graph) -> list[int]:
        try:
            masks = [g.mask(p) for p in self.parts]
        except GraphError as exc:
            raise CertificateError(str(exc)) from None
        seen = 0
        for p, s in zip(self.parts, masks):
            if s & seen or popcount(s) != len(p):
                raise CertificateError("certificate parts overlap")
            seen |= s
        if seen != g.full:
            missing = g.names(g.full & ~seen)
            raise CertificateError(f"certificate misses vertices {missing}")
        return masks


@dataclass
class CertificateCheck:
    certificate: PartitionCertificate
    problems: list = field(default_factory=list)
    eliminated: frozenset = frozenset()  # index pairs (u, v), u < v

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_partition_certificate(g: Graph, cert: PartitionCertificate) -> CertificateCheck:
    """Check the certificate against ``g`` and list the non-edges it rules out.

    Contracting each part gives ``K6`` minus the edge between the first two
    parts, so adding any edge between those two parts yields a ``K6`` minor.
    """
    masks = cert.masks(g)
    check = CertificateCheck(cert)
    for part, s in zip(cert.parts, masks):
        if component_of(g, s & -s, s) != s:
            check.problems.append(f"part {''.join(part)} is not connected")
    for i, j in combinations(range(6), 2):
        touching = bool(g.neighborhood(masks[i]) & masks[j])
        name = f"{''.join(cert.parts[i])}-{''.join(cert.parts[j])}"
        if (i, j) == (0, 1):
            if touching:
                check.problems.append(f"parts {name} must not be adjacent")
        elif not touching:
            check.problems.append(f"parts {name} are not adjacent")
    if check.ok:
        check.eliminated = frozenset(
            (min(u, v), max(u, v)) for u in bits(masks[0]) for v in bits(masks[1])
        )
    return check


def certificate_model(g: Graph, cert: PartitionCertificate, u: str, v: str) -> MinorModel:
    """The K6 model in ``g + uv`` that the certificate describes."""
    from .graph import add_edge

    host = add_edge(g, u, v)
    masks = cert.masks(g)
    return MinorModel(host, K6, dict(zip(K6.labels, masks)))


# Petersen family -------------------------------------------------------------------

def petersen_family() -> list[Graph]:
    """Closure of K6 under Delta-Y and edge-preserving Y-Delta moves, up to isomorphism."""
    start = complete_graph(6)
    found = {canonical_form(start): start}
    queue = [start]
    while queue:
        g = queue.pop()
        for h in _ydelta_neighbours(g):
            key = canonical_form(h)
            if key not in found:
                found[key] = _normalise_labels(h)
                queue.append(found[key])
    return [found[k] for k in sorted(found, key=lambda k: (found[k].n, k))]


def _ydelta_neighbours(g: Graph) -> Iterable[Graph]:
    for t in triangles(g):
        yield delta_y(g, t)
    for v in range(g.n):
        nbrs = g.adj[v]
        if popcount(nbrs) == 3 and not any(g.adj[a] & nbrs for a in bits(nbrs)):
            yield y_delta(g, g.labels[v])


def _normalise_labels(g: Graph) -> Graph:
    return Graph([str(i) for i in range(g.n)], g.adj)


_FAMILY: list[Graph] | None = None


def _family() -> list[Graph]:
    global _FAMILY
    if _FAMILY is None:
        _FAMILY = petersen_family()
    return _FAMILY


def is_intrinsically_linked(g: Graph) -> tuple[int, MinorModel] | None:
    """First Petersen-family member (by index) that is a minor of ``g``, with its model."""
    for i, member in enumerate(_family()):
        model = find_minor(member, g)
        if model is not None:
            return i, model
    return None


# text formats ---------------------------------------------------------------------

def format_certificates(certs: Sequence[PartitionCertificate]) -> str:
    out = []
    for k, cert in enumerate(certs, 1):
        out.append(f"# case {cert.case if cert.case is not None else k}")
        out.extend("part: " + " ".join(part) for part in cert.parts)
    return "\n".join(out) + "\n"


def parse_certificates(text: str) -> list[PartitionCertificate]:
    certs = []
    parts: list[list[str]] = []
    case = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            words = line[1:].split()
            if len(words) == 2 and words[0] == "case" and words[1].isdigit():
                if parts:
                    raise ParseError(lineno, "case comment inside an unfinished certificate")
                case = int(words[1])
            continue
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != "part":
            raise ParseError(lineno, f"expected 'part: ...', got {line!r}")
        labels = rest.split()
        if not labels:
            raise ParseError(lineno, "empty part")
        parts.append(labels)
        if len(parts) == 6:
            certs.append(PartitionCertificate(parts, case if case is not None else len(certs) + 1))
            parts, case = [], None
    if parts:
        raise ParseError(len(text.splitlines()), f"certificate has {len(parts)} parts, expected 6")
    return certs


def format_model(model: MinorModel) -> str:
    lines = [f"branch {x}: " + " ".join(model.host.names(s)) for x, s in model.branch_sets.items()]
    return "\n".join(lines) + "\n"


def parse_model(text: str, pattern: Graph, host: Graph) -> MinorModel:
    sets = {}
    for lineno, key, rest in data_lines(text):
        head, _, x = key.partition(" ")
        if head != "branch" or not x:
            raise ParseError(lineno, f"expected 'branch LABEL: ...', got {key!r}")
        if x not in pattern.labels:
            raise ParseError(lineno, f"unknown pattern vertex {x!r}")
        try:
            sets[x] = host.mask(rest.split())
        except GraphError as exc:
            raise ParseError(lineno, str(exc)) from None
    return MinorModel(host, pattern, sets)
