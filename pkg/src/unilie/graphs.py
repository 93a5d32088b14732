"""Edge-colored directed graphs and their uniformity diagnostics.

Vertices are named v1..vq and colors z1..zp externally; all public data
structures carry 1-based indices to match that naming, while search internals
work 0-based.  An arc (i, j, k) means a directed edge from v_i to v_j carrying
color z_k; at most one arc may join an unordered vertex pair.

A coloring is *uniform* when the graph is s-regular for some s >= 1, the
coloring is proper (edges sharing a vertex get distinct colors), every color
is used, and every color class has the same size r.  validate_uniform reports
every violation of these conditions rather than stopping at the first.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .exact import IntMatrix


class BudgetExceededError(RuntimeError):
    """A bounded search exhausted its node budget before finishing."""

    def __init__(self, budget: int, visited: int):
        super().__init__(f"search budget exceeded ({visited} node visits, budget {budget})")
        self.budget = budget
        self.visited = visited


DEFAULT_SEARCH_BUDGET = 10**8


@dataclass(frozen=True)
class SimpleGraph:
    """Plain undirected simple graph; edges are 1-based pairs (i, j) with i < j."""

    q: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("need at least one vertex")
        for (i, j) in self.edges:
            if not (1 <= i < j <= self.q):
                raise ValueError(f"bad edge ({i}, {j})")

    @staticmethod
    def from_edges(q: int, edges) -> "SimpleGraph":
        canon = frozenset((min(i, j), max(i, j)) for i, j in edges)
        if any(i == j for i, j in edges):
            raise ValueError("loops are not allowed")
        return SimpleGraph(q, canon)

    def degree(self, v: int) -> int:
        return sum(1 for (i, j) in self.edges if v in (i, j))

    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(v) for v in range(1, self.q + 1))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class ColoredDigraph:
    """Directed graph with arc colors; the core combinatorial object.

    arcs holds 1-based triples (tail, head, color).  Construction rejects
    loops, repeated unordered pairs, and out-of-range indices; an unused color
    is allowed here and surfaces as a NotSurjective violation in
    validate_uniform.
    """

    q: int
    p: int
    arcs: frozenset[tuple[int, int, int]]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("need at least one vertex")
        if self.p < 1:
            raise ValueError("need at least one color")
        seen_pairs = set()
        for (i, j, k) in self.arcs:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= self.q and 1 <= j <= self.q):
                raise ValueError(f"vertex out of range in arc ({i}, {j}, {k})")
            if not (1 <= k <= self.p):
                raise ValueError(f"color out of range in arc ({i}, {j}, {k})")
            pair = (min(i, j), max(i, j))
            if pair in seen_pairs:
                raise ValueError(f"more than one arc on vertex pair {pair}")
            seen_pairs.add(pair)

    @staticmethod
    def from_arcs(q: int, p: int, arcs, undirected: bool = False) -> "ColoredDigraph":
        """Build from an iterable of (tail, head, color); undirected input is
        canonicalized to tail < head."""
        if undirected:
            arcs = [(min(i, j), max(i, j), k) for i, j, k in arcs]
        return ColoredDigraph(q, p, frozenset(tuple(a) for a in arcs))

    def sorted_arcs(self) -> list[tuple[int, int, int]]:
        return sorted(self.arcs)

    def undirected_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(i, j), max(i, j)) for i, j, _ in self.arcs)

    def support(self) -> SimpleGraph:
        return SimpleGraph(self.q, self.undirected_edges())

    def pair_color(self) -> dict[tuple[int, int], tuple[int, int, int]]:
        """Map unordered pair (i<j) -> its full arc (tail, head, color)."""
        return {(min(i, j), max(i, j)): (i, j, k) for i, j, k in self.arcs}

    def degree(self, v: int) -> int:
        return sum(1 for (i, j, _) in self.arcs if v in (i, j))


# ---------------------------------------------------------------------------
# uniformity report

@dataclass(frozen=True)
class NonProper:
    vertex: int
    color: int


@dataclass(frozen=True)
class ColorCountMismatch:
    color: int
    count: int


@dataclass(frozen=True)
class NotRegular:
    vertex: int
    degree: int


@dataclass(frozen=True)
class NotSurjective:
    color: int


Violation = NonProper | ColorCountMismatch | NotRegular | NotSurjective

_VIOLATION_ORDER = {NonProper: 0, ColorCountMismatch: 1, NotRegular: 2, NotSurjective: 3}


def _sort_violations(violations) -> tuple[Violation, ...]:
    return tuple(sorted(violations,
                        key=lambda v: (_VIOLATION_ORDER[type(v)],) + tuple(vars(v).values())))


@dataclass(frozen=True)
class UniformityReport:
    """Outcome of the uniformity check; r and s are meaningful only when
    is_uniform holds (they are best-effort modal values otherwise)."""

    is_uniform: bool
    p: int
    q: int
    r: int
    s: int
    violations: tuple[Violation, ...]


def _mode(values) -> int:
    """Most frequent value, smallest on ties; 0 for empty input."""
    if not values:
        return 0
    counts = Counter(values)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)


def validate_uniform(g: ColoredDigraph) -> UniformityReport:
    """Check regularity, properness, surjectivity, and equal color counts.

    All violations are enumerated.  When the report is clean the graph is a
    uniformly colored digraph of type (p, q, r) and degree s, and these
    numbers satisfy 2 r p = s q.
    """
    violations: list[Violation] = []
    degrees = {v: 0 for v in range(1, g.q + 1)}
    incident_colors: dict[int, list[int]] = {v: [] for v in range(1, g.q + 1)}
    color_counts = {k: 0 for k in range(1, g.p + 1)}
    for (i, j, k) in g.arcs:
        degrees[i] += 1
        degrees[j] += 1
        incident_colors[i].append(k)
        incident_colors[j].append(k)
        color_counts[k] += 1

    s = _mode(list(degrees.values()))
    for v in range(1, g.q + 1):
        if degrees[v] != s:
            violations.append(NotRegular(vertex=v, degree=degrees[v]))

    used = {k: c for k, c in color_counts.items() if c > 0}
    for k in range(1, g.p + 1):
        if color_counts[k] == 0:
            violations.append(NotSurjective(color=k))
    r = _mode(list(used.values()))
    for k, c in sorted(used.items()):
        if c != r:
            violations.append(ColorCountMismatch(color=k, count=c))

    for v in range(1, g.q + 1):
        for k, c in sorted(Counter(incident_colors[v]).items()):
            if c > 1:
                violations.append(NonProper(vertex=v, color=k))

    if not g.arcs:
        s = 0
        r = 0
    ordered = _sort_violations(violations)
    is_uniform = not ordered and s >= 1
    return UniformityReport(is_uniform=is_uniform, p=g.p, q=g.q, r=r, s=s, violations=ordered)


def color_classes(g: ColoredDigraph) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """Arcs grouped by color; entry k-1 lists the arcs of color k, sorted."""
    classes: list[list[tuple[int, int, int]]] = [[] for _ in range(g.p)]
    for arc in g.arcs:
        classes[arc[2] - 1].append(arc)
    return tuple(tuple(sorted(c)) for c in classes)


def skew_adjacency(g: ColoredDigraph, k: int) -> IntMatrix:
    """Skew-symmetric adjacency of color class k: entry (i, j) is +1 when the
    arc (v_i, v_j, z_k) is present, -1 for the reverse arc, else 0."""
    if not (1 <= k <= g.p):
        raise ValueError(f"color {k} out of range")
    m = [[0] * g.q for _ in range(g.q)]
    for (i, j, c) in g.arcs:
        if c == k:
            m[i - 1][j - 1] = 1
            m[j - 1][i - 1] = -1
    return IntMatrix.from_rows(m)


# ---------------------------------------------------------------------------
# color-permuting automorphisms and coloring equivalence

@dataclass(frozen=True)
class ColorPermAutomorphism:
    """A pair of permutations (vertices, colors) preserving the coloring.

    vertex_images[i-1] is the image of v_i, color_images[k-1] the image of
    z_k, both 1-based.  strict means arc directions are preserved, not just
    underlying colored edges.
    """

    vertex_images: tuple[int, ...]
    color_images: tuple[int, ...]
    strict: bool = False

    def vertex(self, i: int) -> int:
        return self.vertex_images[i - 1]

    def color(self, k: int) -> int:
        return self.color_images[k - 1]


def _vertex_profiles(g: ColoredDigraph) -> dict[int, tuple]:
    """Cheap per-vertex invariant: degree plus sorted incident color-class sizes."""
    class_size = Counter(k for _, _, k in g.arcs)
    prof = {}
    for v in range(1, g.q + 1):
        sizes = sorted(class_size[k] for i, j, k in g.arcs if v in (i, j))
        prof[v] = (len(sizes), tuple(sizes))
    return prof


def _mapping_search(g1: ColoredDigraph, g2: ColoredDigraph, strict: bool, budget: int):
    """Yield (vertex_images, color_images) mapping g1 onto g2, in lexicographic
    order of the vertex image word.

    Non-strict mappings send each colored edge to a colored edge ignoring arc
    direction.  Colors unused on either side are paired off in increasing
    order, which keeps the automorphism set a group.
    """
    q, p = g1.q, g1.p
    pairs1 = g1.pair_color()
    pairs2 = g2.pair_color()
    if len(pairs1) != len(pairs2):
        return
    prof1 = _vertex_profiles(g1)
    prof2 = _vertex_profiles(g2)
    if sorted(prof1.values()) != sorted(prof2.values()):
        return
    used1 = sorted({k for _, _, k in g1.arcs})
    used2 = sorted({k for _, _, k in g2.arcs})
    if len(used1) != len(used2):
        return
    unused1 = [k for k in range(1, p + 1) if k not in set(used1)]
    unused2 = [k for k in range(1, p + 1) if k not in set(used2)]

    img = [0] * (q + 1)          # vertex image, 1-based, 0 = unassigned
    taken = [False] * (q + 1)
    cmap: dict[int, int] = {}
    cmap_inv: dict[int, int] = {}
    visited = 0

    def place(v: int):
        nonlocal visited
        if v > q:
            color_images = [0] * p
            for k, l in cmap.items():
                color_images[k - 1] = l
            for k, l in zip(unused1, unused2):
                color_images[k - 1] = l
            yield tuple(img[1:]), tuple(color_images)
            return
        for w in range(1, q + 1):
            if taken[w] or prof1[v] != prof2[w]:
                continue
            visited += 1
            if visited > budget:
                raise BudgetExceededError(budget, visited)
            new_colors = []
            ok = True
            for u in range(1, v):
                a1 = pairs1.get((min(u, v), max(u, v)))
                a2 = pairs2.get((min(img[u], w), max(img[u], w)))
                if (a1 is None) != (a2 is None):
                    ok = False
                    break
                if a1 is None:
                    continue
                t1, h1, k1 = a1
                t2, h2, k2 = a2
                if strict:
                    # the arc (t1, h1) must map onto (t2, h2) exactly
                    mt1 = img[t1] if t1 != v else w
                    mh1 = img[h1] if h1 != v else w
                    if (mt1, mh1) != (t2, h2):
                        ok = False
                        break
                want = cmap.get(k1)
                if want is None:
                    if k2 in cmap_inv:
                        ok = False
                        break
                    new_colors.append((k1, k2))
                    cmap[k1] = k2
                    cmap_inv[k2] = k1
                elif want != k2:
                    ok = False
                    break
            if ok:
                img[v] = w
                taken[w] = True
                yield from place(v + 1)
                img[v] = 0
                taken[w] = False
            for k1, k2 in new_colors:
                del cmap[k1]
                del cmap_inv[k2]

    yield from place(1)


def automorphisms(g: ColoredDigraph, strict: bool = False,
                  budget: int = DEFAULT_SEARCH_BUDGET) -> list[ColorPermAutomorphism]:
    """All color-permuting automorphisms, lexicographically ordered.

    The result always forms a group; with strict=True only direction
    preserving maps are returned.
    """
    out = [ColorPermAutomorphism(vi, ci, strict)
           for vi, ci in _mapping_search(g, g, strict, budget)]
    out.sort(key=lambda a: (a.vertex_images, a.color_images))
    return out


def colorings_equivalent(g1: ColoredDigraph, g2: ColoredDigraph, strict: bool = False,
                         budget: int = DEFAULT_SEARCH_BUDGET) -> ColorPermAutomorphism | None:
    """First vertex/color bijection carrying g1 onto g2, or None.

    Graphs with different q or p are never equivalent.  By default arc
    directions are ignored; strict=True compares directed arcs.
    """
    if (g1.q, g1.p) != (g2.q, g2.p):
        return None
    for vi, ci in _mapping_search(g1, g2, strict, budget):
        return ColorPermAutomorphism(vi, ci, strict)
    return None


def relabel(g: ColoredDigraph, a: ColorPermAutomorphism) -> ColoredDigraph:
    """Push the graph through a vertex/color bijection (directions kept)."""
    arcs = [(a.vertex(i), a.vertex(j), a.color(k)) for i, j, k in g.arcs]
    return ColoredDigraph.from_arcs(g.q, g.p, arcs)


def disjoint_union(g1: ColoredDigraph, g2: ColoredDigraph,
                   color_mode: str = "disjoint") -> ColoredDigraph:
    """Disjoint union on vertices; colors either stay disjoint or are shared.

    With color_mode="disjoint" the second graph's colors are shifted past the
    first's; with "shared" both must have the same p and the color sets are
    identified index-wise.
    """
    if color_mode not in ("disjoint", "shared"):
        raise ValueError(f"unknown color_mode {color_mode!r}")
    if color_mode == "shared" and g1.p != g2.p:
        raise ValueError("shared color mode needs equal color counts")
    q = g1.q + g2.q
    shift_k = g1.p if color_mode == "disjoint" else 0
    p = g1.p + g2.p if color_mode == "disjoint" else g1.p
    arcs = list(g1.arcs)
    arcs += [(i + g1.q, j + g1.q, k + shift_k) for i, j, k in g2.arcs]
    return ColoredDigraph.from_arcs(q, p, arcs)


def connected_components(g: ColoredDigraph) -> list[tuple[int, ...]]:
    """Vertex sets of the underlying undirected components, each sorted."""
    parent = list(range(g.q + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j, _) in g.arcs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps: dict[int, list[int]] = {}
    for v in range(1, g.q + 1):
        comps.setdefault(find(v), []).append(v)
    return sorted((tuple(sorted(vs)) for vs in comps.values()), key=lambda t: t[0])
