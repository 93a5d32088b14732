"""Exhaustive generation and classification at desk scale.

Pipeline: regular graphs up to isomorphism, uniform edge colorings up to
equivalence, diagonal sign orbits, signed-permutation merging, stored
general-linear identifications, and sound pairwise distinctness certificates.
Everything is exact and deterministic; searches take explicit budgets and
raise BudgetExceededError instead of degrading.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import exact
from .algebra import (GeneralLinearWitness, IsoWitness, SignedPermWitness,
                      StructureTensor, check_witness, compose_witnesses,
                      derivation_dim, diagonal_orbit_representatives,
                      from_graph, is_heisenberg_type, j_map,
                      signed_perm_isomorphic, verify_uniform_basis)
from .graphs import (BudgetExceededError, ColoredDigraph, DEFAULT_SEARCH_BUDGET,
                     SimpleGraph, colorings_equivalent)
from .families import heisenberg, ring_algebra

DEFAULT_ENUM_BUDGET = 10 ** 7


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# regular graphs up to isomorphism

def _pair_index(q: int) -> dict[tuple[int, int], int]:
    return {pr: n for n, pr in enumerate(itertools.combinations(range(q), 2))}


def _canonical_key(q: int, edges, _cache={}) -> int:
    """Minimal packed adjacency over all q! relabelings; 0-based edges."""
    key = (q, frozenset(edges))
    hit = _cache.get(key)
    if hit is not None:
        return hit
    idx = _pair_index(q)
    best = None
    edges = list(key[1])
    for perm in itertools.permutations(range(q)):
        code = 0
        for (a, b) in edges:
            pa, pb = perm[a], perm[b]
            code |= 1 << idx[(pa, pb) if pa < pb else (pb, pa)]
        if best is None or code < best:
            best = code
    _cache[key] = best
    return best


def _regular_graphs_qs(q: int, s: int, budget: int) -> list[SimpleGraph]:
    """All s-regular graphs on q labeled vertices, deduplicated; canonical
    search fixes vertex 0's neighborhood to {1..s}."""
    visited = 0
    found: dict[int, SimpleGraph] = {}

    def extend(i: int, edges: list[tuple[int, int]], residual: list[int]):
        nonlocal visited
        if i == q:
            if all(d == 0 for d in residual):
                code = _canonical_key(q, edges)
                if code not in found:
                    found[code] = SimpleGraph.from_edges(
                        q, [(a + 1, b + 1) for a, b in edges])
            return
        need = residual[i]
        candidates = [j for j in range(i + 1, q) if residual[j] > 0]
        if need > len(candidates):
            return
        for chosen in itertools.combinations(candidates, need):
            visited += 1
            if visited > budget:
                raise BudgetExceededError(budget, visited)
            for j in chosen:
                residual[j] -= 1
            residual[i] = 0
            if all(residual[j] <= q - i - 2 or residual[j] == 0
                   for j in range(i + 1, q)):
                extend(i + 1, edges + [(i, j) for j in chosen], residual)
            for j in chosen:
                residual[j] += 1
            residual[i] = need

    residual = [s] * q
    # normalize vertex 0's neighbors to 1..s; every class has such a labeling
    for j in range(1, s + 1):
        residual[j] -= 1
    residual[0] = 0
    extend(1, [(0, j) for j in range(1, s + 1)], residual)
    return [found[c] for c in sorted(found)]


def regular_graphs(q_max: int, budget: int = DEFAULT_ENUM_BUDGET) -> list[SimpleGraph]:
    """All regular simple graphs with degree >= 1 on 2..q_max vertices, up to
    isomorphism, ordered by (vertex count, degree, canonical form)."""
    if q_max > 8:
        raise ValueError("exhaustive canonical dedup is sized for q <= 8")
    out = []
    for q in range(2, q_max + 1):
        for s in range(1, q):
            if (q * s) % 2 == 0:
                out.extend(_regular_graphs_qs(q, s, budget))
    return out


# ---------------------------------------------------------------------------
# uniform colorings of one graph

def _matching_partitions(edges: list[tuple[int, int]], p: int, r: int,
                         budget: int):
    """Yield partitions of edges into exactly p matchings of size r, each
    partition once (classes labeled by first appearance)."""
    m = len(edges)
    if p * r != m:
        return
    labels = [0] * m
    masks: list[int] = []
    sizes: list[int] = []
    visited = 0

    def place(e: int):
        nonlocal visited
        if e == m:
            if len(sizes) == p and all(sz == r for sz in sizes):
                yield tuple(labels)
            return
        a, b = edges[e]
        bit = (1 << a) | (1 << b)
        for c in range(len(sizes)):
            if sizes[c] < r and not (masks[c] & bit):
                visited += 1
                if visited > budget:
                    raise BudgetExceededError(budget, visited)
                labels[e] = c
                masks[c] |= bit
                sizes[c] += 1
                yield from place(e + 1)
                masks[c] &= ~bit
                sizes[c] -= 1
        if len(sizes) < p:
            visited += 1
            if visited > budget:
                raise BudgetExceededError(budget, visited)
            labels[e] = len(sizes)
            masks.append(bit)
            sizes.append(1)
            yield from place(e + 1)
            masks.pop()
            sizes.pop()

    yield from place(0)


def _labels_to_coloring(g: SimpleGraph, labels) -> ColoredDigraph:
    edges = g.sorted_edges()
    arcs = [(i, j, labels[n] + 1) for n, (i, j) in enumerate(edges)]
    return ColoredDigraph.from_arcs(g.q, max(labels) + 1, arcs, undirected=True)


def uniform_colorings(g: SimpleGraph, budget: int = DEFAULT_ENUM_BUDGET,
                      strict: bool = False) -> list[ColoredDigraph]:
    """All uniform edge colorings of a regular graph up to coloring
    equivalence, ordered by increasing p.  Non-regular input has none."""
    degs = g.degrees()
    if not degs or len(set(degs)) != 1 or degs[0] == 0:
        return []
    s = degs[0]
    edges = [(i - 1, j - 1) for (i, j) in g.sorted_edges()]
    m = len(edges)
    reps: list[ColoredDigraph] = []
    for p in _divisors(m):
        if p < s:
            continue  # properness forces s distinct colors at each vertex
        r = m // p
        for labels in _matching_partitions(edges, p, r, budget):
            cand = _labels_to_coloring(g, labels)
            if not any(colorings_equivalent(cand, known, strict=strict,
                                            budget=budget)
                       for known in reps if known.p == p):
                reps.append(cand)
    reps.sort(key=lambda c: (c.p, c.sorted_arcs()))
    return reps


# ---------------------------------------------------------------------------
# factorizations of complete graphs

@dataclass(frozen=True)
class FactorizationReport:
    n: int
    kind: str                      # "one-factorization" | "near-one-factorization"
    labeled_count: int
    classes: tuple[ColoredDigraph, ...]


def _complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def _pair_cycle_signature(n: int, factors) -> tuple:
    """Multiset, over factor pairs, of the union's component shapes as
    (edge count, is_cycle); near-perfect factors make paths, so plain cycle
    types would not be well defined.  Cheap equivalence invariant used to
    bucket factorizations before witness search."""
    sig = []
    for fa, fb in itertools.combinations(factors, 2):
        adj = {v: [] for v in range(1, n + 1)}
        for (a, b) in list(fa) + list(fb):
            adj[a].append(b)
            adj[b].append(a)
        seen = set()
        shape = []
        for v in adj:
            if v in seen or not adj[v]:
                continue
            stack, comp = [v], set()
            while stack:
                cur = stack.pop()
                if cur in comp:
                    continue
                comp.add(cur)
                stack.extend(adj[cur])
            seen |= comp
            edge_count = sum(len(adj[u]) for u in comp) // 2
            is_cycle = all(len(adj[u]) == 2 for u in comp)
            shape.append((edge_count, is_cycle))
        sig.append(tuple(sorted(shape)))
    return tuple(sorted(sig))


def _factorization_report(n: int, kind: str, p: int, r: int,
                          budget: int) -> FactorizationReport:
    g = _complete_graph(n)
    edges = [(i - 1, j - 1) for (i, j) in g.sorted_edges()]
    labeled = 0
    buckets: dict[tuple, list[ColoredDigraph]] = {}
    for labels in _matching_partitions(edges, p, r, budget):
        labeled += 1
        cand = _labels_to_coloring(g, labels)
        factors = [[] for _ in range(p)]
        for idx, (i, j) in enumerate(g.sorted_edges()):
            factors[labels[idx]].append((i, j))
        sig = _pair_cycle_signature(n, factors)
        group = buckets.setdefault(sig, [])
        if not any(colorings_equivalent(cand, known, budget=budget)
                   for known in group):
            group.append(cand)
    classes = [c for sig in sorted(buckets) for c in buckets[sig]]
    classes.sort(key=lambda c: c.sorted_arcs())
    return FactorizationReport(n, kind, labeled, tuple(classes))


def one_factorizations(n: int, budget: int = DEFAULT_ENUM_BUDGET) -> FactorizationReport:
    """Partitions of E(K_n) into perfect matchings, up to equivalence plus the
    raw count of distinct partitions."""
    if n < 2 or n % 2 != 0:
        raise ValueError("one-factorizations need an even number of vertices")
    if n > 8:
        raise ValueError("sized for n <= 8")
    return _factorization_report(n, "one-factorization", n - 1, n // 2, budget)


def near_one_factorizations(n: int, budget: int = DEFAULT_ENUM_BUDGET) -> FactorizationReport:
    """Partitions of E(K_n) into near-perfect matchings (each missing one
    vertex), up to equivalence plus the raw labeled count."""
    if n < 3 or n % 2 != 1:
        raise ValueError("near-one-factorizations need an odd number of vertices")
    if n > 7:
        raise ValueError("sized for n <= 7")
    return _factorization_report(n, "near-one-factorization", n, (n - 1) // 2, budget)


# ---------------------------------------------------------------------------
# sign classes over one support

@dataclass(frozen=True)
class SignClass:
    members: tuple[int, ...]       # indices into orbit_representatives
    representative: StructureTensor
    heisenberg: bool
    witnesses: tuple[tuple[int, int, SignedPermWitness], ...]


@dataclass(frozen=True)
class SignClassReport:
    tensor: StructureTensor
    orbit_representatives: tuple[StructureTensor, ...]
    classes: tuple[SignClass, ...]


def sign_class_report(g: ColoredDigraph | StructureTensor,
                      budget: int = DEFAULT_SEARCH_BUDGET) -> SignClassReport:
    """Diagonal sign orbits of a uniform support, then signed-permutation
    merging with verified witnesses."""
    t = from_graph(g) if isinstance(g, ColoredDigraph) else g
    rep = verify_uniform_basis(t)
    if not rep.is_uniform:
        raise ValueError("sign class analysis needs a uniform tensor")
    reps = diagonal_orbit_representatives(t)
    parent = list(range(len(reps)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    witnesses = []
    for a, b in itertools.combinations(range(len(reps)), 2):
        if find(a) == find(b):
            continue
        w = signed_perm_isomorphic(reps[a], reps[b], budget=budget)
        if w is not None:
            witnesses.append((a, b, w))
            parent[find(b)] = find(a)
    groups: dict[int, list[int]] = {}
    for i in range(len(reps)):
        groups.setdefault(find(i), []).append(i)
    classes = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        members = tuple(sorted(groups[root]))
        classes.append(SignClass(
            members=members,
            representative=reps[members[0]],
            heisenberg=is_heisenberg_type(reps[members[0]]),
            witnesses=tuple(w for w in witnesses if w[0] in members)))
    return SignClassReport(tensor=t, orbit_representatives=tuple(reps),
                           classes=tuple(classes))


# ---------------------------------------------------------------------------
# stored general-linear identifications

def ring_sum_witness() -> tuple[StructureTensor, StructureTensor, GeneralLinearWitness]:
    """Exact basis change from the primed 4-generator ring algebra onto the
    direct sum of two 3-dimensional Heisenberg algebras, showing that the
    color-class size r is not determined by the algebra."""
    t1 = from_graph(ring_algebra(2, primed=True))
    t2 = _heisenberg_sum()
    cols = [
        (1, 0, 1, 0, 0, 0),   # u1 -> x1 + x3
        (0, 1, 0, 1, 0, 0),   # u2 -> x2 + x4
        (1, 0, -1, 0, 0, 0),  # u3 -> x1 - x3
        (0, 1, 0, -1, 0, 0),  # u4 -> x2 - x4
        (0, 0, 0, 0, 1, 1),   # w1 -> z1 + z2
        (0, 0, 0, 0, -1, 1),  # w2 -> z2 - z1
    ]
    m = exact.IntMatrix.from_rows(list(zip(*cols)))
    return t1, t2, GeneralLinearWitness(m)


def _heisenberg_sum() -> StructureTensor:
    return StructureTensor.from_entries(4, 2, [(1, 2, 1, 1), (3, 4, 2, 1)])


def near_factorization_sign_witness() -> tuple[StructureTensor, StructureTensor, SignedPermWitness]:
    """Signed permutation identifying the two sign patterns on the 5-vertex
    near-factorization support that differ in one bracket.  It seeds the proof
    that all sign choices over that support give one algebra."""
    base = [(3, 4, 1, 1), (2, 5, 1, 1), (4, 5, 2, 1), (1, 3, 2, 1),
            (1, 5, 3, 1), (2, 4, 3, 1), (1, 2, 4, 1), (3, 5, 4, 1),
            (2, 3, 5, 1)]
    n1 = StructureTensor.from_brackets(5, 5, base + [(1, 4, 5, 1)])
    n2 = StructureTensor.from_brackets(5, 5, base + [(1, 4, 5, -1)])
    w = SignedPermWitness(vertex_images=(1, 3, 5, 2, 4),
                          color_images=(1, 3, 5, 2, 4),
                          vertex_signs=(1, -1, 1, 1, 1),
                          color_signs=(-1, 1, 1, -1, -1))
    return n2, n1, w


def _gl_anchors():
    return [ring_sum_witness()]


# ---------------------------------------------------------------------------
# named reference presentations

@dataclass(frozen=True)
class KnownPresentation:
    name: str
    tensor: StructureTensor
    ptype: tuple[int, int, int]
    heisenberg: bool


def known_presentations() -> list[KnownPresentation]:
    """Reference presentations for every small-q class, named after the
    constructions that produce them."""
    from .families import (cyclic, free_two_step, quaternionic)

    def T(q, p, brackets):
        return StructureTensor.from_brackets(q, p, brackets)

    rows = [
        ("heisenberg(1)", from_graph(heisenberg(1)), (1, 2, 1)),
        ("heisenberg(2)", from_graph(heisenberg(2)), (1, 4, 2)),
        ("heisenberg(1)+heisenberg(1)", _heisenberg_sum(), (2, 4, 1)),
        ("ring(2,primed)", from_graph(ring_algebra(2, primed=True)), (2, 4, 2)),
        ("free(3)", from_graph(free_two_step(3)), (3, 3, 1)),
        ("cyclic(4)", from_graph(cyclic(4)), (4, 4, 1)),
        ("ring(2)", from_graph(ring_algebra(2)), (2, 4, 2)),
        ("cyclic(5)", from_graph(cyclic(5)), (5, 5, 1)),
        ("quaternionic", from_graph(quaternionic()), (3, 4, 2)),
        ("quaternionic-associate", from_graph(quaternionic(True)), (3, 4, 2)),
        ("free(4)", from_graph(free_two_step(4)), (6, 4, 1)),
        ("k5-near-factorization", near_factorization_sign_witness()[1], (5, 5, 2)),
        ("free(5)", from_graph(free_two_step(5)), (10, 5, 1)),
    ]
    out = []
    for name, t, ptype in rows:
        rep = verify_uniform_basis(t)
        assert rep.is_uniform and (rep.p, rep.q, rep.r) == ptype
        out.append(KnownPresentation(name, t, ptype, is_heisenberg_type(t)))
    return out


# ---------------------------------------------------------------------------
# the classification pipeline

@dataclass(frozen=True)
class ClassificationRow:
    case: int
    types: tuple[tuple[int, int, int], ...]   # all (p, q, r) seen in the class
    s: int
    representative: StructureTensor
    family: tuple[str, ...]                   # matching reference presentations
    merged: int                               # sign/orientation classes merged
    heisenberg: bool


@dataclass(frozen=True)
class Certificate:
    left: int                  # case ids
    right: int
    kind: str                  # "dimension-split" | "derivation-dimension" | "central-direction"
    detail: tuple


class UndeterminedPairError(RuntimeError):
    """Two candidate classes admit no witness and no separating certificate."""

    def __init__(self, left: StructureTensor, right: StructureTensor):
        self.left = left
        self.right = right
        super().__init__("undetermined pair of candidate classes "
                         f"at (p, q) = ({left.p}, {left.q})")


@dataclass(frozen=True)
class _Candidate:
    tensor: StructureTensor
    support: SimpleGraph
    coloring: ColoredDigraph
    ptype: tuple[int, int, int]
    s: int
    heisenberg: bool
    orbits: int                 # diagonal orbits inside this sign class


def _candidates(q_max: int, budget: int) -> list[_Candidate]:
    cands = []
    for g in regular_graphs(q_max, budget):
        for coloring in uniform_colorings(g, budget):
            report = sign_class_report(coloring, budget)
            rep0 = verify_uniform_basis(report.tensor)
            for sc in report.classes:
                cands.append(_Candidate(
                    tensor=sc.representative, support=g, coloring=coloring,
                    ptype=(rep0.p, rep0.q, rep0.r), s=rep0.s,
                    heisenberg=sc.heisenberg, orbits=len(sc.members)))
    return cands


def _singular_central_direction(t: StructureTensor, bound: int = 2):
    """Nonzero rational central direction with singular J map, if a small one
    exists.  Existence of any real one is an isomorphism invariant."""
    if 3 ** t.p > 400_000:
        bound = 1
    for c in itertools.product(range(-bound, bound + 1), repeat=t.p):
        if all(x == 0 for x in c):
            continue
        first = next(x for x in c if x != 0)
        if first < 0:
            continue
        if exact.det(j_map(t, c).rows) == 0:
            return c
    return None


def _distinctness_certificate(ca: list[_Candidate], cb: list[_Candidate]):
    """Sound reason the two merged classes are non-isomorphic, or None.

    Tried in order: (dim center, dim total) split; derivation algebra
    dimension; one side with a square-norm J identity (forcing the canonical
    determinant form positive on real central directions) against an explicit
    singular direction on the other.
    """
    ta, tb = ca[0].tensor, cb[0].tensor
    if (ta.p, ta.q) != (tb.p, tb.q):
        return ("dimension-split", (ta.p, ta.q), (tb.p, tb.q))
    da, db = derivation_dim(ta), derivation_dim(tb)
    if da != db:
        return ("derivation-dimension", da, db)
    a_h = any(m.heisenberg for m in ca)
    b_h = any(m.heisenberg for m in cb)
    if a_h != b_h:
        heis, other = (ca, cb) if a_h else (cb, ca)
        for member in other:
            d = _singular_central_direction(member.tensor)
            if d is not None:
                return ("central-direction", "square-norm identity" if a_h else d,
                        d if a_h else "square-norm identity")
    return None


def classify_detailed(q_max: int = 5, budget: int = DEFAULT_ENUM_BUDGET
                      ) -> tuple[list[ClassificationRow], list[Certificate]]:
    """Classification rows plus the distinctness certificates backing them.

    Raises UndeterminedPairError when two classes can neither be merged by a
    verified witness nor separated by a sound invariant.
    """
    cands = _candidates(q_max, budget)
    parent = list(range(len(cands)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # merge by signed permutations
    for a, b in itertools.combinations(range(len(cands)), 2):
        if find(a) == find(b):
            continue
        ta, tb = cands[a].tensor, cands[b].tensor
        if (ta.p, ta.q) != (tb.p, tb.q):
            continue
        if signed_perm_isomorphic(ta, tb, budget=budget) is not None:
            parent[find(b)] = find(a)

    # merge by stored general-linear identifications, re-verified end to end
    for src, dst, glw in _gl_anchors():
        if src.q > q_max or dst.q > q_max:
            continue
        loc = {}
        for label, anchor in (("src", src), ("dst", dst)):
            for idx, cand in enumerate(cands):
                if (cand.ptype[0], cand.ptype[1]) != (anchor.p, anchor.q):
                    continue
                w = signed_perm_isomorphic(cand.tensor, anchor, budget=budget)
                if w is not None:
                    loc[label] = (idx, w)
                    break
        if "src" not in loc or "dst" not in loc:
            continue
        (ia, wa), (ib, wb) = loc["src"], loc["dst"]
        if find(ia) == find(ib):
            continue
        from .algebra import invert_witness
        full = compose_witnesses(invert_witness(wb), compose_witnesses(glw, wa))
        res = check_witness(cands[ia].tensor, cands[ib].tensor, full)
        if not res.ok:
            raise AssertionError("stored identification failed verification")
        parent[find(ib)] = find(ia)

    groups: dict[int, list[int]] = {}
    for i in range(len(cands)):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda m: (
        cands[m[0]].ptype[1], cands[m[0]].ptype[0], cands[m[0]].ptype[2],
        cands[m[0]].tensor.sorted_entries()))

    known = known_presentations()
    rows = []
    for case, members in enumerate(ordered, start=1):
        ms = [cands[i] for i in members]
        names = []
        for kp in known:
            for m in ms:
                if (kp.ptype[0], kp.ptype[1]) != (m.ptype[0], m.ptype[1]):
                    continue
                if signed_perm_isomorphic(kp.tensor, m.tensor, budget=budget):
                    names.append(kp.name)
                    break
        rows.append(ClassificationRow(
            case=case,
            types=tuple(sorted({m.ptype for m in ms})),
            s=ms[0].s,
            representative=ms[0].tensor,
            family=tuple(names),
            merged=len(ms),
            heisenberg=any(m.heisenberg for m in ms)))

    certificates = []
    for (ia, ma), (ib, mb) in itertools.combinations(enumerate(ordered), 2):
        ca = [cands[i] for i in ma]
        cb = [cands[i] for i in mb]
        cert = _distinctness_certificate(ca, cb)
        if cert is None:
            raise UndeterminedPairError(ca[0].tensor, cb[0].tensor)
        kind, da, db = cert
        certificates.append(Certificate(left=ia + 1, right=ib + 1,
                                        kind=kind, detail=(da, db)))
    return rows, certificates


def classify(q_max: int = 5, budget: int = DEFAULT_ENUM_BUDGET) -> list[ClassificationRow]:
    """Isomorphism classes of uniform algebras with at most q_max generators."""
    return classify_detailed(q_max, budget)[0]
