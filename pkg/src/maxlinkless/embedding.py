"""Straight-line embeddings with integer coordinates and their linking numbers.

All geometric predicates are exact: coordinates are Python ints and
intersection parameters are compared by cross-multiplication. Floating point
only appears in the bulk linking-number sums, whose terms are small integers.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, bits, complete_graph, data_lines, ParseError

Point = tuple[int, int, int]


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Embedding3:
    coords: dict  # label -> (x, y, z)

    def point(self, label: str) -> Point:
        try:
            return self.coords[label]
        except KeyError:
            raise EmbeddingError(f"no coordinate for vertex {label!r}") from None

    def points(self, g: Graph) -> list[Point]:
        return [self.point(label) for label in g.labels]


# vector helpers --------------------------------------------------------------------

def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def orient3d(a, b, c, d) -> int:
    """Sign of the volume of tetrahedron ``abcd``."""
    v = dot(sub(b, a), cross(sub(c, a), sub(d, a)))
    return (v > 0) - (v < 0)


def orient2d(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p, a, b) -> bool:
    """``p`` lies on the closed segment ``ab`` (any dimension, exact)."""
    ab = [y - x for x, y in zip(a, b)]
    ap = [y - x for x, y in zip(a, p)]
    # collinear: all 2x2 minors vanish
    for i, j in combinations(range(len(ab)), 2):
        if ab[i] * ap[j] - ab[j] * ap[i]:
            return False
    t = sum(x * y for x, y in zip(ab, ap))
    return 0 <= t <= sum(x * x for x in ab)


def _segments_intersect_2d(a, b, c, d) -> bool:
    o1, o2 = orient2d(a, b, c), orient2d(a, b, d)
    o3, o4 = orient2d(c, d, a), orient2d(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def segments_intersect(a, b, c, d) -> bool:
    """Closed 3D segments ``ab`` and ``cd`` share a point."""
    if orient3d(a, b, c, d):
        return False
    normal = cross(sub(b, a), sub(c, a))
    if normal == (0, 0, 0):
        normal = cross(sub(b, a), sub(d, a))
    if normal == (0, 0, 0):
        # all four points collinear
        return on_segment(c, a, b) or on_segment(d, a, b) or on_segment(a, c, d) or on_segment(b, c, d)
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]

    def proj(p):
        return (p[keep[0]], p[keep[1]])

    return _segments_intersect_2d(proj(a), proj(b), proj(c), proj(d))


def embedding_problems(g: Graph, e: Embedding3) -> list[str]:
    """Reasons the straight-line drawing of ``g`` is not an embedding (empty if valid)."""
    pts = e.points(g)
    problems = []
    seen = {}
    for label, p in zip(g.labels, pts):
        if p in seen:
            problems.append(f"vertices {seen[p]} and {label} coincide")
        seen.setdefault(p, label)
    edges = g.edges()
    for u, v in edges:
        for w in range(g.n):
            if w != u and w != v and on_segment(pts[w], pts[u], pts[v]):
                problems.append(f"vertex {g.labels[w]} lies on edge {g.labels[u]}{g.labels[v]}")
    for (a, b), (c, d) in combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        if segments_intersect(pts[a], pts[b], pts[c], pts[d]):
            problems.append(
                f"edges {g.labels[a]}{g.labels[b]} and {g.labels[c]}{g.labels[d]} intersect"
            )
    return problems


def validate_embedding(g: Graph, e: Embedding3) -> bool:
    return not embedding_problems(g, e)


# the embedding of G ----------------------------------------------------------------

# G minus P and T drawn crossing-free in the plane z = 0, mirror-symmetric in
# x -> -x under the prime swap; P sits above the plane and T below.
G_COORDS = {
    "A": (-6, 5, 0), "B": (-2, 4, 0), "C": (-2, 1, 0), "D": (-6, -1, 0),
    "A'": (6, 5, 0), "B'": (2, 4, 0), "C'": (2, 1, 0), "D'": (6, -1, 0),
    "Q": (0, 4, 0), "R": (0, 2, 0), "S": (0, 0, 0),
    "P": (1, 3, 6), "T": (-1, 2, -6),
}


def canonical_embedding_g() -> Embedding3:
    return Embedding3(dict(G_COORDS))


# cycles ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Cycle:
    """Simple cycle as a vertex-index tuple: least vertex first, smaller neighbour second."""

    vertices: tuple

    @property
    def mask(self) -> int:
        out = 0
        for v in self.vertices:
            out |= 1 << v
        return out

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def reversed(self) -> tuple:
        """The same cycle traversed the other way (not canonical)."""
        return (self.vertices[0],) + tuple(reversed(self.vertices[1:]))

    def labels(self, g: Graph) -> str:
        return "-".join(g.labels[v] for v in self.vertices)


def canonical_cycle(vertices: Sequence[int]) -> Cycle:
    vs = list(vertices)
    i = vs.index(min(vs))
    vs = vs[i:] + vs[:i]
    if len(vs) > 2 and vs[-1] < vs[1]:
        vs = [vs[0]] + vs[:0:-1]
    return Cycle(tuple(vs))


def enumerate_cycles(g: Graph) -> list[Cycle]:
    """Every simple cycle once, sorted by length then vertex tuple."""
    adj = g.adj
    found = []
    for s in range(g.n):
        allowed = g.full & ~((1 << (s + 1)) - 1)
        path = [s]

        def extend(v: int, on_path: int) -> None:
            for w in bits(adj[v] & allowed & ~on_path):
                path.append(w)
                extend(w, on_path | 1 << w)
                path.pop()
            if len(path) >= 3 and adj[v] >> s & 1 and path[1] < path[-1]:
                found.append(Cycle(tuple(path)))

        extend(s, 1 << s)
    found.sort(key=lambda c: (len(c.vertices), c.vertices))
    return found


def disjoint_pairs(cycles: Sequence[Cycle]) -> list[tuple[Cycle, Cycle]]:
    masks = [c.mask for c in cycles]
    return [
        (cycles[i], cycles[j])
        for i in range(len(cycles))
        for j in range(i + 1, len(cycles))
        if not masks[i] & masks[j]
    ]


# projections ---------------------------------------------------------------------

def candidate_directions(count: int = 64, seed: int = 20240601) -> list[Point]:
    """Fixed pseudo-random sequence of small nonzero integer vectors."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = (rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
        if d != (0, 0, 0) and d not in out:
            out.append(d)
    return out


class Projection:
    """Orthogonal projection along integer direction ``d`` with a right-handed frame.

    ``(u, v, d)`` is right-handed and heights ``p . d`` grow toward the viewer,
    so the strand with the larger height passes over.
    """

    def __init__(self, d: Point):
        if d == (0, 0, 0):
            raise EmbeddingError("projection direction must be nonzero")
        axis = (1, 0, 0) if cross(d, (1, 0, 0)) != (0, 0, 0) else (0, 1, 0)
        self.d = d
        self.u = cross(d, axis)
        self.v = cross(d, self.u)

    def flat(self, p: Point) -> tuple[int, int]:
        return (dot(p, self.u), dot(p, self.v))

    def height(self, p: Point) -> int:
        return dot(p, self.d)


def _crossing(proj: Projection, a, b, c, d) -> tuple[int, int, tuple] | None:
    """Signed crossing of oriented segments ``ab`` and ``cd`` in the projection.

    Returns ``(over, sign, point)`` with ``over`` = +1 when ``ab`` passes over,
    or ``None`` when the projections do not cross. Assumes a generic direction.
    """
    fa, fb, fc, fd = proj.flat(a), proj.flat(b), proj.flat(c), proj.flat(d)
    o1, o2 = orient2d(fa, fb, fc), orient2d(fa, fb, fd)
    o3, o4 = orient2d(fc, fd, fa), orient2d(fc, fd, fb)
    if not (o1 * o2 < 0 and o3 * o4 < 0):
        return None
    r = (fb[0] - fa[0], fb[1] - fa[1])
    s = (fd[0] - fc[0], fd[1] - fc[1])
    w = (fc[0] - fa[0], fc[1] - fa[1])
    den = r[0] * s[1] - r[1] * s[0]
    tn = w[0] * s[1] - w[1] * s[0]  # t = tn / den along ab
    sn = w[0] * r[1] - w[1] * r[0]  # s = sn / den along cd
    ha, hb, hc, hd = proj.height(a), proj.height(b), proj.height(c), proj.height(d)
    gap = (ha - hc) * den + tn * (hb - ha) - sn * (hd - hc)
    if gap == 0:
        raise EmbeddingError("segments meet in space")
    sign_den = 1 if den > 0 else -1
    over = 1 if gap * sign_den > 0 else -1
    # crossing sign from (over strand, under strand) in the right-handed frame
    sign = sign_den if over == 1 else -sign_den
    point = (Fraction(fa[0] * den + tn * r[0], den), Fraction(fa[1] * den + tn * r[1], den))
    return over, sign, point


def is_generic(proj: Projection, points: Sequence[Point], segments: Sequence[tuple[int, int]]) -> bool:
    """No segment along the direction, no coincident or touching projections, no triple points."""
    flat = [proj.flat(p) for p in points]
    if len(set(flat)) < len(flat):
        return False
    for a, b in segments:
        if flat[a] == flat[b]:
            return False
        for w in range(len(points)):
            if w != a and w != b and on_segment(flat[w], flat[a], flat[b]):
                return False
    seen = set()
    for (a, b), (c, d) in combinations(segments, 2):
        if len({a, b, c, d}) < 4:
            continue
        try:
            hit = _crossing(proj, points[a], points[b], points[c], points[d])
        except EmbeddingError:
            return False
        if hit is not None:
            if hit[2] in seen:
                return False
            seen.add(hit[2])
    return True


def generic_projection(points: Sequence[Point], segments: Sequence[tuple[int, int]], skip: int = 0) -> Projection:
    """First generic candidate direction, after skipping ``skip`` generic ones."""
    for d in candidate_directions():
        proj = Projection(d)
        if is_generic(proj, points, segments):
            if skip == 0:
                return proj
            skip -= 1
    raise EmbeddingError("no generic projection direction among the candidates")


# linking numbers ------------------------------------------------------------------

@dataclass
class CrossingTally:
    total: int = 0  # sum of signs over all crossings between the two curves
    first_over: int = 0  # sum of signs where the first curve passes over
    count_first_over: int = 0  # number of crossings where the first curve passes over


def _tally(proj: Projection, pts, c1: Sequence[int], c2: Sequence[int]) -> CrossingTally:
    tally = CrossingTally()
    seg1 = [(c1[i], c1[(i + 1) % len(c1)]) for i in range(len(c1))]
    seg2 = [(c2[i], c2[(i + 1) % len(c2)]) for i in range(len(c2))]
    for a, b in seg1:
        for c, d in seg2:
            hit = _crossing(proj, pts[a], pts[b], pts[c], pts[d])
            if hit is None:
                continue
            over, sign, _ = hit
            tally.total += sign
            if over == 1:
                tally.first_over += sign
                tally.count_first_over += 1
    return tally


def _cycle_vertices(c) -> tuple:
    return c.vertices if isinstance(c, Cycle) else tuple(c)


def linking_number(g: Graph, e: Embedding3, c1, c2, direction: Point | None = None) -> int:
    """Linking number of two vertex-disjoint cycles (vertex-index sequences or ``Cycle``).

    Half the signed crossing count between the two projected polygons. Without
    ``direction`` the first generic candidate for these two polygons is used.
    """
    v1, v2 = _cycle_vertices(c1), _cycle_vertices(c2)
    if set(v1) & set(v2):
        raise EmbeddingError("cycles share a vertex")
    pts = e.points(g)
    idx = list(v1) + list(v2)
    local = [pts[v] for v in idx]
    k = len(v1)
    segs = [(i, (i + 1) % k) for i in range(k)] + [(k + i, k + (i + 1) % len(v2)) for i in range(len(v2))]
    if direction is None:
        proj = generic_projection(local, segs)
    else:
        proj = Projection(direction)
        if not is_generic(proj, local, segs):
            raise EmbeddingError(f"direction {direction} is not generic for these cycles")
    tally = _tally(proj, pts, v1, v2)
    if tally.total % 2:
        raise EmbeddingError("odd signed crossing count")
    return tally.total // 2


def crossing_tally(g: Graph, e: Embedding3, c1, c2, direction: Point) -> CrossingTally:
    return _tally(Projection(direction), e.points(g), _cycle_vertices(c1), _cycle_vertices(c2))


def crossing_matrix(g: Graph, e: Embedding3, proj: Projection) -> np.ndarray:
    """``W[i, j]`` = summed sign of crossings where edge ``i`` passes over edge ``j``.

    Edges follow ``g.edges()`` and are oriented from lower to higher index.
    """
    pts = e.points(g)
    edges = g.edges()
    w = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for i, j in combinations(range(len(edges)), 2):
        (a, b), (c, d) = edges[i], edges[j]
        if len({a, b, c, d}) < 4:
            continue
        hit = _crossing(proj, pts[a], pts[b], pts[c], pts[d])
        if hit is None:
            continue
        over, sign, _ = hit
        if over == 1:
            w[i, j] += sign
        else:
            w[j, i] += sign
    return w


def cycle_vectors(g: Graph, cycles: Sequence[Cycle]) -> np.ndarray:
    """Signed edge-incidence vectors of the cycles (traversal orientation)."""
    index = {pair: k for k, pair in enumerate(g.edges())}
    out = np.zeros((len(cycles), len(index)), dtype=np.int64)
    for r, c in enumerate(cycles):
        for a, b in c.edges():
            if a < b:
                out[r, index[(a, b)]] += 1
            else:
                out[r, index[(b, a)]] -= 1
    return out


@dataclass
class LinkReport:
    cycles: int
    pairs: int
    histogram: Counter = field(default_factory=Counter)  # |lk| -> number of pairs
    first_nonzero: tuple | None = None  # (cycle, cycle, lk)
    directions: list = field(default_factory=list)
    direction_agreement: bool = True

    @property
    def max_abs(self) -> int:
        return max(self.histogram, default=0)

    def lines(self, g: Graph) -> list[str]:
        out = [
            f"cycles: {self.cycles}",
            f"disjoint cycle pairs: {self.pairs}",
            "projection directions: " + ", ".join(str(d) for d in self.directions),
            f"directions agree on every pair: {'yes' if self.direction_agreement else 'no'}",
            "|lk| histogram: " + ", ".join(f"{k}:{v}" for k, v in sorted(self.histogram.items())),
            f"max |lk|: {self.max_abs}",
        ]
        if self.first_nonzero:
            c1, c2, lk = self.first_nonzero
            out.append(f"first linked pair: {c1.labels(g)} / {c2.labels(g)} lk={lk}")
        return out


def linkless_report(g: Graph, e: Embedding3, directions: int = 1, block: int = 1024) -> LinkReport:
    """Linking numbers of every pair of vertex-disjoint cycles.

    Linking number is bilinear in the cycles' edge vectors, so with ``W`` from
    :func:`crossing_matrix` the pair ``(c1, c2)`` has ``lk = c1 W c2``. With
    ``directions > 1`` the computation is repeated for further generic
    directions and all pairs must agree.
    """
    problems = embedding_problems(g, e)
    if problems:
        raise EmbeddingError("invalid embedding: " + "; ".join(problems[:3]))
    cycles = enumerate_cycles(g)
    pts = e.points(g)
    segs = g.edges()
    projs = [generic_projection(pts, segs, skip=k) for k in range(directions)]
    report = LinkReport(len(cycles), 0, directions=[p.d for p in projs])
    if not cycles:
        return report
    vecs = cycle_vectors(g, cycles).astype(np.float64)
    member = np.zeros((len(cycles), g.n), dtype=np.float64)
    for r, c in enumerate(cycles):
        member[r, list(c.vertices)] = 1.0
    # exact: every entry is a small integer, far below 2**53
    forms = [vecs @ crossing_matrix(g, e, p).astype(np.float64) for p in projs]
    for start in range(0, len(cycles), block):
        stop = min(start + block, len(cycles))
        shared = member[start:stop] @ member.T
        rows, cols = np.nonzero(shared == 0)
        keep = cols > rows + start
        rows, cols = rows[keep], cols[keep]
        if not len(rows):
            continue
        lks = []
        for f in forms:
            full = np.rint(f[start:stop] @ vecs.T).astype(np.int64)
            lks.append(full[rows, cols])
        for other in lks[1:]:
            if not np.array_equal(other, lks[0]):
                report.direction_agreement = False
        lk = lks[0]
        report.pairs += len(lk)
        values, counts = np.unique(np.abs(lk), return_counts=True)
        for val, cnt in zip(values.tolist(), counts.tolist()):
            report.histogram[val] += cnt
        if report.first_nonzero is None:
            hits = np.nonzero(lk)[0]
            if len(hits):
                h = hits[0]
                report.first_nonzero = (cycles[rows[h] + start], cycles[cols[h]], int(lk[h]))
    return report


# K6 parity -------------------------------------------------------------------------

def conway_gordon_parity(e: Embedding3, g: Graph | None = None) -> int:
    """Sum over the 10 splittings of K6 into two triangles of lk, mod 2."""
    if g is None:
        if len(e.coords) != 6:
            raise GraphError("Conway-Gordon parity needs K6")
        g = Graph(tuple(e.coords), complete_graph(6).adj)
    if g.n != 6 or g.m != 15:
        raise GraphError("Conway-Gordon parity needs K6")
    problems = embedding_problems(g, e)
    if problems:
        raise EmbeddingError("invalid embedding: " + "; ".join(problems[:3]))
    total = 0
    for tri in combinations(range(1, 6), 2):
        first = (0,) + tri
        second = tuple(v for v in range(6) if v not in first)
        total += linking_number(g, e, first, second)
    return total % 2


def random_embedding(g: Graph, rng: random.Random, span: int = 20) -> Embedding3:
    """Random integer coordinates, redrawn until they form a valid embedding."""
    while True:
        coords = {
            label: (rng.randint(-span, span), rng.randint(-span, span), rng.randint(-span, span))
            for label in g.labels
        }
        e = Embedding3(coords)
        if validate_embedding(g, e):
            return e


# coordinate files ------------------------------------------------------------------

def format_coords(g: Graph, e: Embedding3) -> str:
    return "".join(f"coord: {label} {x} {y} {z}\n" for label, (x, y, z) in zip(g.labels, e.points(g)))


def parse_coords(text: str) -> Embedding3:
    coords = {}
    for lineno, key, rest in data_lines(text):
        if key != "coord":
            raise ParseError(lineno, f"expected 'coord: V x y z', got key {key!r}")
        fields = rest.split()
        if len(fields) != 4:
            raise ParseError(lineno, "coord needs a label and three integers")
        label = fields[0]
        try:
            xyz = tuple(int(f) for f in fields[1:])
        except ValueError:
            raise ParseError(lineno, "coordinates must be integers") from None
        if label in coords:
            raise ParseError(lineno, f"duplicate coordinate for {label!r}")
        coords[label] = xyz
    return Embedding3(coords)
