"""Two-step nilpotent Lie algebras presented by structure tensors.

A StructureTensor fixes a basis v1..vq (generators) and z1..zp (center) with
[v_i, z_k] = [z_k, z_l] = 0 and every [v_i, v_j] equal to 0 or a single signed
center vector +-z_k.  Such a tensor is exactly the data of a colored digraph:
the arc (i, j, k) corresponds to [v_i, v_j] = z_k, and tensors whose clean
uniformity report passes correspond to uniformly colored digraphs.

Conventions used throughout:

* coordinates are ordered v1..vq, z1..zp; matrices act on coordinate columns,
  so entry (row a, col b) is the coefficient of basis vector a in the image
  of basis vector b;
* the map J_z on the generator space is defined against the basis inner
  product that makes v1..vq, z1..zp orthonormal; its matrix has entry (j, i)
  equal to the coefficient of v_j in J_z(v_i), which makes J_{z_k} the
  transpose (equivalently the negative) of the skew adjacency of color k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .exact import IntMatrix, Scalar
from .graphs import (BudgetExceededError, ColoredDigraph, ColorPermAutomorphism,
                     DEFAULT_SEARCH_BUDGET, NonProper, ColorCountMismatch, NotRegular,
                     NotSurjective, UniformityReport, _mapping_search, _mode,
                     _sort_violations, disjoint_union, validate_uniform)


@dataclass(frozen=True)
class StructureTensor:
    """Bracket data: entries (i, j, k, sign) with i < j mean [v_i, v_j] = sign * z_k.

    All indices are 1-based.  Each generator pair carries at most one entry,
    mirroring the one-arc-per-pair rule for colored digraphs.
    """

    q: int
    p: int
    entries: frozenset[tuple[int, int, int, int]]

    def __post_init__(self):
        if self.q < 1 or self.p < 1:
            raise ValueError("need q >= 1 generators and p >= 1 center directions")
        seen = set()
        for (i, j, k, s) in self.entries:
            if not (1 <= i < j <= self.q):
                raise ValueError(f"bad generator pair ({i}, {j})")
            if not (1 <= k <= self.p):
                raise ValueError(f"center index {k} out of range")
            if s not in (1, -1):
                raise ValueError(f"sign must be +-1, got {s}")
            if (i, j) in seen:
                raise ValueError(f"two bracket values on pair ({i}, {j})")
            seen.add((i, j))

    @staticmethod
    def from_entries(q: int, p: int, entries) -> "StructureTensor":
        return StructureTensor(q, p, frozenset(tuple(e) for e in entries))

    @staticmethod
    def from_brackets(q: int, p: int, brackets) -> "StructureTensor":
        """Build from (i, j, k, sign) tuples allowing i > j, which flips the sign."""
        entries = []
        for (i, j, k, s) in brackets:
            if i < j:
                entries.append((i, j, k, s))
            else:
                entries.append((j, i, k, -s))
        return StructureTensor.from_entries(q, p, entries)

    def sorted_entries(self) -> list[tuple[int, int, int, int]]:
        return sorted(self.entries)

    def pair_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        """(i, j) with i < j -> (k, sign)."""
        return {(i, j): (k, s) for i, j, k, s in self.entries}

    def alpha(self, i: int, j: int, k: int) -> int:
        """Structure constant of z_k in [v_i, v_j], any order of i, j."""
        if i == j:
            return 0
        flip = 1
        if i > j:
            i, j, flip = j, i, -1
        for (a, b, c, s) in self.entries:
            if (a, b) == (i, j):
                return flip * s if c == k else 0
        return 0

    def dim(self) -> int:
        return self.q + self.p


def from_graph(g: ColoredDigraph) -> StructureTensor:
    """Structure tensor of a colored digraph: arc (i, j, k) gives [v_i, v_j] = z_k."""
    entries = []
    for (i, j, k) in g.arcs:
        if i < j:
            entries.append((i, j, k, 1))
        else:
            entries.append((j, i, k, -1))
    return StructureTensor.from_entries(g.q, g.p, entries)


def to_graph(t: StructureTensor) -> ColoredDigraph:
    """Inverse of from_graph; positive entries orient i -> j, negative j -> i."""
    arcs = [(i, j, k) if s > 0 else (j, i, k) for i, j, k, s in t.entries]
    return ColoredDigraph.from_arcs(t.q, t.p, arcs)


def verify_uniform_basis(t: StructureTensor) -> UniformityReport:
    """Uniformity check stated directly on the bracket data.

    Agrees with validate_uniform(to_graph(t)) in every case; both routes are
    kept because they make independent mistakes.
    """
    violations = []
    partner_colors: dict[int, list[int]] = {i: [] for i in range(1, t.q + 1)}
    color_counts = {k: 0 for k in range(1, t.p + 1)}
    for (i, j, k, _) in t.entries:
        partner_colors[i].append(k)
        partner_colors[j].append(k)
        color_counts[k] += 1

    degrees = {i: len(partner_colors[i]) for i in partner_colors}
    s = _mode(list(degrees.values()))
    for i in range(1, t.q + 1):
        if degrees[i] != s:
            violations.append(NotRegular(vertex=i, degree=degrees[i]))

    used = {k: c for k, c in color_counts.items() if c > 0}
    for k in range(1, t.p + 1):
        if color_counts[k] == 0:
            violations.append(NotSurjective(color=k))
    r = _mode(list(used.values()))
    for k, c in sorted(used.items()):
        if c != r:
            violations.append(ColorCountMismatch(color=k, count=c))

    for i in range(1, t.q + 1):
        seen: dict[int, int] = {}
        for k in partner_colors[i]:
            seen[k] = seen.get(k, 0) + 1
        for k, c in sorted(seen.items()):
            if c > 1:
                violations.append(NonProper(vertex=i, color=k))

    if not t.entries:
        s = 0
        r = 0
    ordered = _sort_violations(violations)
    return UniformityReport(is_uniform=not ordered and s >= 1,
                            p=t.p, q=t.q, r=r, s=s, violations=ordered)


# ---------------------------------------------------------------------------
# vectors and brackets

@dataclass(frozen=True)
class NVector:
    """Element of the algebra in coordinates: v over generators, z over center."""

    v: tuple[Scalar, ...]
    z: tuple[Scalar, ...]

    @staticmethod
    def zero(q: int, p: int) -> "NVector":
        return NVector((0,) * q, (0,) * p)

    @staticmethod
    def basis_v(q: int, p: int, i: int) -> "NVector":
        return NVector(tuple(1 if a == i else 0 for a in range(1, q + 1)), (0,) * p)

    @staticmethod
    def basis_z(q: int, p: int, k: int) -> "NVector":
        return NVector((0,) * q, tuple(1 if a == k else 0 for a in range(1, p + 1)))

    @staticmethod
    def from_coords(q: int, p: int, coords) -> "NVector":
        coords = tuple(coords)
        if len(coords) != q + p:
            raise ValueError("coordinate length mismatch")
        return NVector(coords[:q], coords[q:])

    def coords(self) -> tuple[Scalar, ...]:
        return self.v + self.z

    def __add__(self, other: "NVector") -> "NVector":
        return NVector(tuple(a + b for a, b in zip(self.v, other.v)),
                       tuple(a + b for a, b in zip(self.z, other.z)))

    def __sub__(self, other: "NVector") -> "NVector":
        return self + (-other)

    def __neg__(self) -> "NVector":
        return NVector(tuple(-a for a in self.v), tuple(-a for a in self.z))

    def scale(self, c: Scalar) -> "NVector":
        return NVector(tuple(c * a for a in self.v), tuple(c * a for a in self.z))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.v) and all(a == 0 for a in self.z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NVector):
            return NotImplemented
        return (len(self.v) == len(other.v) and len(self.z) == len(other.z)
                and all(a == b for a, b in zip(self.v, other.v))
                and all(a == b for a, b in zip(self.z, other.z)))

    def __hash__(self):
        return hash((tuple(Fraction(a) for a in self.v), tuple(Fraction(a) for a in self.z)))


def bracket(t: StructureTensor, x: NVector, y: NVector) -> NVector:
    """[x, y]; bilinear, lands in the center, ignores the z parts of x and y."""
    if len(x.v) != t.q or len(y.v) != t.q or len(x.z) != t.p or len(y.z) != t.p:
        raise ValueError("vector shape mismatch")
    z = [0] * t.p
    for (i, j, k, s) in t.entries:
        c = x.v[i - 1] * y.v[j - 1] - x.v[j - 1] * y.v[i - 1]
        if c != 0:
            z[k - 1] += s * c
    return NVector((0,) * t.q, tuple(z))


def _bracket_coords(t: StructureTensor, xc, yc) -> tuple[Scalar, ...]:
    """Bracket on raw coordinate tuples of length q + p."""
    x = NVector.from_coords(t.q, t.p, xc)
    y = NVector.from_coords(t.q, t.p, yc)
    return bracket(t, x, y).coords()


# ---------------------------------------------------------------------------
# structural subspaces

def ad_matrix(t: StructureTensor, i: int) -> IntMatrix:
    """Matrix of ad_{v_i} restricted to generators: column j holds [v_i, v_j]."""
    if not (1 <= i <= t.q):
        raise ValueError(f"generator index {i} out of range")
    m = [[0] * t.q for _ in range(t.p)]
    for (a, b, k, s) in t.entries:
        if a == i:
            m[k - 1][b - 1] = s
        elif b == i:
            m[k - 1][a - 1] = -s
    return IntMatrix.from_rows(m)


def ad_rank(t: StructureTensor, i: int) -> int:
    """Rank of ad_{v_i}; equals the degree s for a uniform tensor."""
    return ad_matrix(t, i).rank()


def center(t: StructureTensor) -> list[NVector]:
    """Basis of the center: all of the z-span plus any bracket-free generator
    combinations.  For a uniform tensor this is exactly the z-span."""
    rows = []
    for j in range(1, t.q + 1):
        for k in range(1, t.p + 1):
            rows.append([t.alpha(i, j, k) for i in range(1, t.q + 1)])
    basis = [NVector.basis_z(t.q, t.p, k) for k in range(1, t.p + 1)]
    for vec in exact.nullspace(rows, ncols=t.q):
        basis.append(NVector(vec, (Fraction(0),) * t.p))
    return basis


def commutator(t: StructureTensor) -> list[NVector]:
    """Echelon basis of [n, n] inside the z-span."""
    rows = []
    for (_, _, k, s) in sorted(t.entries):
        rows.append([s if c == k else 0 for c in range(1, t.p + 1)])
    if not rows:
        return []
    red, pivots = exact.rref(rows)
    return [NVector((Fraction(0),) * t.q, tuple(red[r])) for r in range(len(pivots))]


def centralizer(t: StructureTensor, i: int) -> list[NVector]:
    """Basis of {x : [x, v_i] = 0}; dimension p + q - s for a uniform tensor."""
    rows = ad_matrix(t, i).rows  # [v_i, x] = 0 iff [x, v_i] = 0
    basis = [NVector.basis_z(t.q, t.p, k) for k in range(1, t.p + 1)]
    for vec in exact.nullspace(rows, ncols=t.q):
        basis.append(NVector(vec, (Fraction(0),) * t.p))
    return basis


# ---------------------------------------------------------------------------
# J maps

def j_basis(t: StructureTensor, k: int) -> IntMatrix:
    """Matrix of J_{z_k} on generators: J(v_i) = v_j when [v_i, v_j] = z_k,
    -v_j when [v_i, v_j] = -z_k; equals minus the skew adjacency of color k."""
    if not (1 <= k <= t.p):
        raise ValueError(f"center index {k} out of range")
    m = [[0] * t.q for _ in range(t.q)]
    for (i, j, c, s) in t.entries:
        if c == k:
            m[j - 1][i - 1] = s     # coeff of v_j in J(v_i)
            m[i - 1][j - 1] = -s
    return IntMatrix.from_rows(m)


def j_map(t: StructureTensor, coeffs) -> IntMatrix:
    """J map of the center element sum(coeffs[k-1] * z_k)."""
    coeffs = tuple(coeffs)
    if len(coeffs) != t.p:
        raise ValueError("need one coefficient per center direction")
    m = IntMatrix.zero(t.q, t.q)
    for k, c in enumerate(coeffs, start=1):
        if c != 0:
            m = m + j_basis(t, k).scale(c)
    return m


def j_gram(t: StructureTensor) -> IntMatrix:
    """Gram matrix trace(J_{z_k} J_{z_l}^T); equals 2r * I for uniform tensors."""
    rep = verify_uniform_basis(t)
    if not rep.is_uniform:
        raise ValueError("j_gram needs a uniform tensor")
    js = [j_basis(t, k) for k in range(1, t.p + 1)]
    rows = [[(jk @ jl.transpose()).trace() for jl in js] for jk in js]
    return IntMatrix.from_rows(rows)


def is_heisenberg_type(t: StructureTensor) -> bool:
    """Whether J_z^2 = -|z|^2 id holds for the basis inner product, checked by
    polarization: J_k J_l + J_l J_k = -2 delta_kl id on all basis pairs."""
    rep = verify_uniform_basis(t)
    if not rep.is_uniform:
        raise ValueError("is_heisenberg_type needs a uniform tensor")
    js = [j_basis(t, k) for k in range(1, t.p + 1)]
    for k in range(t.p):
        for l in range(k, t.p):
            anti = js[k] @ js[l] + js[l] @ js[k]
            want = IntMatrix.identity(t.q).scale(-2) if k == l else IntMatrix.zero(t.q, t.q)
            if anti != want:
                return False
    return True


@dataclass(frozen=True)
class TotallyGeodesicReport:
    is_subalgebra: bool
    is_totally_geodesic: bool


def totally_geodesic(t: StructureTensor, generators, colors) -> TotallyGeodesicReport:
    """Test the span of {v_i : i in generators} + {z_k : k in colors}.

    Subalgebra: every bracket between chosen generators lands in the chosen
    center directions.  Totally geodesic additionally needs each chosen color
    class to touch either both or neither endpoint of the generator set, which
    is J-invariance of the span.
    """
    vset = set(generators)
    cset = set(colors)
    for i in vset:
        if not (1 <= i <= t.q):
            raise ValueError(f"generator index {i} out of range")
    for k in cset:
        if not (1 <= k <= t.p):
            raise ValueError(f"center index {k} out of range")
    is_sub = all(k in cset
                 for (i, j, k, _) in t.entries if i in vset and j in vset)
    j_invariant = all(len({i, j} & vset) != 1
                      for (i, j, k, _) in t.entries if k in cset)
    return TotallyGeodesicReport(is_subalgebra=is_sub,
                                 is_totally_geodesic=is_sub and j_invariant)


# ---------------------------------------------------------------------------
# isomorphism witnesses

@dataclass(frozen=True)
class SignedPermWitness:
    """Signed permutation map: v_i -> vertex_signs[i-1] * v_{vertex_images[i-1]}
    and z_k -> color_signs[k-1] * z_{color_images[k-1]}."""

    vertex_images: tuple[int, ...]
    color_images: tuple[int, ...]
    vertex_signs: tuple[int, ...]
    color_signs: tuple[int, ...]

    def __post_init__(self):
        q = len(self.vertex_images)
        p = len(self.color_images)
        if sorted(self.vertex_images) != list(range(1, q + 1)):
            raise ValueError("vertex images are not a permutation")
        if sorted(self.color_images) != list(range(1, p + 1)):
            raise ValueError("color images are not a permutation")
        if len(self.vertex_signs) != q or any(s not in (1, -1) for s in self.vertex_signs):
            raise ValueError("bad vertex signs")
        if len(self.color_signs) != p or any(s not in (1, -1) for s in self.color_signs):
            raise ValueError("bad color signs")

    def to_matrix(self) -> IntMatrix:
        q = len(self.vertex_images)
        p = len(self.color_images)
        n = q + p
        m = [[0] * n for _ in range(n)]
        for i, (im, s) in enumerate(zip(self.vertex_images, self.vertex_signs)):
            m[im - 1][i] = s
        for k, (im, s) in enumerate(zip(self.color_images, self.color_signs)):
            m[q + im - 1][q + k] = s
        return IntMatrix.from_rows(m)


@dataclass(frozen=True)
class GeneralLinearWitness:
    """Arbitrary invertible rational map in the v1..vq, z1..zp coordinate order;
    column b holds the image of basis vector b."""

    matrix: IntMatrix

    def to_matrix(self) -> IntMatrix:
        return self.matrix


IsoWitness = SignedPermWitness | GeneralLinearWitness


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    failures: tuple[str, ...]


def _basis_name(t: StructureTensor, idx: int) -> str:
    return f"v{idx + 1}" if idx < t.q else f"z{idx - t.q + 1}"


def check_witness(t1: StructureTensor, t2: StructureTensor, w: IsoWitness) -> WitnessCheck:
    """Verify that w intertwines brackets on every basis pair, exactly.

    Both tensors must share (q, p); the witness matrix must be invertible.
    The failure list names each offending basis pair.
    """
    if (t1.q, t1.p) != (t2.q, t2.p):
        raise ValueError("witness checking needs matching q and p")
    m = w.to_matrix()
    n = t1.dim()
    if m.nrows != n or m.ncols != n:
        raise ValueError("witness matrix has the wrong shape")
    if m.det() == 0:
        raise ValueError("witness matrix is singular")
    cols = m.transpose().rows  # column b = image of basis b
    failures = []
    for a in range(n):
        for b in range(a + 1, n):
            lhs = m.apply(_bracket_coords(t1, _unit(n, a), _unit(n, b)))
            rhs = _bracket_coords(t2, cols[a], cols[b])
            if any(x != y for x, y in zip(lhs, rhs)):
                failures.append(f"[{_basis_name(t1, a)}, {_basis_name(t1, b)}]")
    return WitnessCheck(ok=not failures, failures=tuple(failures))


def _unit(n: int, a: int) -> tuple[int, ...]:
    return tuple(1 if i == a else 0 for i in range(n))


def compose_witnesses(second: IsoWitness, first: IsoWitness) -> GeneralLinearWitness:
    """Witness for the composition second after first."""
    return GeneralLinearWitness(second.to_matrix() @ first.to_matrix())


def invert_witness(w: IsoWitness) -> GeneralLinearWitness:
    inv = exact.inverse(w.to_matrix())
    if inv is None:
        raise ValueError("witness matrix is singular")
    return GeneralLinearWitness(inv)


def lift_automorphism(t: StructureTensor, a: ColorPermAutomorphism,
                      vertex_signs=None, color_signs=None) -> SignedPermWitness:
    """Lift a direction-preserving colored-graph automorphism to the algebra.

    Optional sign tuples extend the lift to signed maps.  Raises ValueError
    naming the first failing bracket when a does not actually preserve the
    tensor (for example when it reverses an arc and no signs compensate).
    """
    w = SignedPermWitness(tuple(a.vertex_images), tuple(a.color_images),
                          tuple(vertex_signs or (1,) * t.q),
                          tuple(color_signs or (1,) * t.p))
    res = check_witness(t, t, w)
    if not res.ok:
        raise ValueError(f"not an algebra automorphism; first failure at {res.failures[0]}")
    return w


# ---------------------------------------------------------------------------
# sign vectors and the diagonal action

def support_pairs(t: StructureTensor) -> list[tuple[int, int]]:
    """Bracketed generator pairs in lexicographic order; sign vectors follow it."""
    return sorted((i, j) for (i, j, _, _) in t.entries)


def sign_vector(t: StructureTensor) -> tuple[int, ...]:
    pm = t.pair_map()
    return tuple(pm[pr][1] for pr in support_pairs(t))


def apply_signs(t: StructureTensor, signs) -> StructureTensor:
    """Same support and colors, with the given signs along support_pairs order."""
    pairs = support_pairs(t)
    signs = tuple(signs)
    if len(signs) != len(pairs) or any(s not in (1, -1) for s in signs):
        raise ValueError("need one sign of +-1 per bracketed pair")
    pm = t.pair_map()
    entries = [(i, j, pm[(i, j)][0], s) for (i, j), s in zip(pairs, signs)]
    return StructureTensor.from_entries(t.q, t.p, entries)


def _flip_space(t: StructureTensor) -> list[int]:
    """GF(2) basis of the sign patterns reachable by the diagonal action.

    Negating v_i or z_k flips the sign of every bracket touching it; the
    reachable flips form the column space of the pair/variable incidence,
    encoded over support_pairs positions.
    """
    pairs = support_pairs(t)
    width = len(pairs)
    pm = t.pair_map()
    vectors = []
    for i in range(1, t.q + 1):
        vectors.append(exact.gf2_from_support(
            [idx for idx, (a, b) in enumerate(pairs) if i in (a, b)], width))
    for k in range(1, t.p + 1):
        vectors.append(exact.gf2_from_support(
            [idx for idx, pr in enumerate(pairs) if pm[pr][0] == k], width))
    return exact.gf2_echelon(v for v in vectors if v)


def _signs_to_bits(signs) -> list[int]:
    return [0 if s > 0 else 1 for s in signs]


def _bits_to_signs(bits) -> tuple[int, ...]:
    return tuple(1 if b == 0 else -1 for b in bits)


def sign_orbit_canonical(t: StructureTensor) -> tuple[int, ...]:
    """Lexicographically least sign vector reachable from t by negating basis
    vectors (+1 sorts before -1).  Tensors with equal support, colors, and
    canonical vector are isomorphic via a diagonal witness."""
    pairs = support_pairs(t)
    width = len(pairs)
    v = exact.gf2_from_bits(_signs_to_bits(sign_vector(t)), width)
    reduced = exact.gf2_reduce(v, _flip_space(t))
    return _bits_to_signs(exact.gf2_to_bits(reduced, width))


def diagonal_orbit_count(t: StructureTensor) -> int:
    """Number of diagonal-action orbits on sign vectors over this support."""
    return 2 ** (len(support_pairs(t)) - len(_flip_space(t)))


def diagonal_orbit_representatives(t: StructureTensor,
                                   budget: int = 1 << 20) -> list[StructureTensor]:
    """One canonical representative per diagonal orbit, lexicographic order."""
    pairs = support_pairs(t)
    width = len(pairs)
    basis = _flip_space(t)
    pivots = {width - b.bit_length() for b in basis}
    free = [i for i in range(width) if i not in pivots]
    if 2 ** len(free) > budget:
        raise BudgetExceededError(budget, 2 ** len(free))
    reps = []
    for assignment in itertools.product((1, -1), repeat=len(free)):
        signs = [1] * width
        for pos, s in zip(free, assignment):
            signs[pos] = s
        reps.append(apply_signs(t, signs))
    reps.sort(key=lambda r: _signs_to_bits(sign_vector(r)))
    return reps


def diagonal_witness(t1: StructureTensor, t2: StructureTensor) -> SignedPermWitness | None:
    """Identity-permutation witness t1 -> t2 from basis negations, if one exists.

    Requires equal support and colors; returns None when the sign patterns lie
    in different diagonal orbits.
    """
    if (t1.q, t1.p) != (t2.q, t2.p) or support_pairs(t1) != support_pairs(t2):
        return None
    pm1, pm2 = t1.pair_map(), t2.pair_map()
    if any(pm1[pr][0] != pm2[pr][0] for pr in pm1):
        return None
    width = t1.q + t1.p
    equations = []
    for (i, j) in support_pairs(t1):
        rhs = 0 if pm1[(i, j)][1] == pm2[(i, j)][1] else 1
        mask = exact.gf2_from_support([i - 1, j - 1, t1.q + pm1[(i, j)][0] - 1], width)
        equations.append((mask, rhs))
    sol = exact.gf2_solve_min(equations, width)
    if sol is None:
        return None
    bits = exact.gf2_to_bits(sol, width)
    w = SignedPermWitness(tuple(range(1, t1.q + 1)), tuple(range(1, t1.p + 1)),
                          _bits_to_signs(bits[:t1.q]), _bits_to_signs(bits[t1.q:]))
    if not check_witness(t1, t2, w).ok:
        raise AssertionError("diagonal sign solve produced a bad witness")
    return w


# ---------------------------------------------------------------------------
# signed-permutation isomorphism search

def signed_perm_isomorphic(t1: StructureTensor, t2: StructureTensor,
                           budget: int = DEFAULT_SEARCH_BUDGET) -> SignedPermWitness | None:
    """Search the signed-permutation family for a witness t1 -> t2.

    Vertex and color permutations are enumerated lexicographically over the
    underlying colored-graph mappings; for each, the sign constraints form a
    linear system over GF(2) whose least solution gives the witness.  None
    means no witness exists in this family; it is only a non-isomorphism proof
    together with separating invariants.
    """
    if (t1.q, t1.p) != (t2.q, t2.p):
        raise ValueError("signed-permutation search needs matching q and p")
    g1, g2 = to_graph(t1), to_graph(t2)
    pm1, pm2 = t1.pair_map(), t2.pair_map()
    width = t1.q + t1.p
    for vimg, cimg in _mapping_search(g1, g2, False, budget):
        equations = []
        for (i, j), (k, s1) in pm1.items():
            a, b = vimg[i - 1], vimg[j - 1]
            l = cimg[k - 1]
            (a2, b2) = (min(a, b), max(a, b))
            k2, s2 = pm2[(a2, b2)]
            assert k2 == l
            eps2 = s2 if (a, b) == (a2, b2) else -s2
            rhs = 0 if s1 == eps2 else 1
            mask = exact.gf2_from_support([i - 1, j - 1, t1.q + k - 1], width)
            equations.append((mask, rhs))
        sol = exact.gf2_solve_min(equations, width)
        if sol is None:
            continue
        bits = exact.gf2_to_bits(sol, width)
        w = SignedPermWitness(vimg, cimg,
                              _bits_to_signs(bits[:t1.q]), _bits_to_signs(bits[t1.q:]))
        if not check_witness(t1, t2, w).ok:
            raise AssertionError("sign solve produced a bad witness")
        return w
    return None


def concatenate(t1: StructureTensor, t2: StructureTensor,
                color_mode: str = "disjoint") -> StructureTensor:
    """Direct sum on generators; center summed ("disjoint") or identified
    index-wise ("shared").  Matches the disjoint union of the graphs."""
    return from_graph(disjoint_union(to_graph(t1), to_graph(t2), color_mode))


# ---------------------------------------------------------------------------
# derivations

def derivation_dim(t: StructureTensor) -> int:
    """Dimension of the derivation algebra {D : D[x,y] = [Dx,y] + [x,Dy]}.

    A true isomorphism invariant, computed by exact rank of the defining
    linear system in the n^2 matrix unknowns.
    """
    n = t.dim()
    q = t.q

    def beta(c: int, d: int) -> tuple[int, ...]:
        # z coordinates of [e_c, e_d] for 0-based basis positions
        if c < q and d < q:
            return tuple(t.alpha(c + 1, d + 1, k) for k in range(1, t.p + 1))
        return (0,) * t.p

    rows = []
    for b1 in range(n):
        for b2 in range(b1 + 1, n):
            w = beta(b1, b2)
            for a in range(n):
                row = [0] * (n * n)
                # D applied to [e_b1, e_b2]
                for k, wk in enumerate(w):
                    if wk:
                        row[a * n + (q + k)] += wk
                # minus [D e_b1, e_b2] and [e_b1, D e_b2], z components only
                if a >= q:
                    k = a - q
                    for c in range(q):
                        bz = beta(c, b2)[k]
                        if bz:
                            row[c * n + b1] -= bz
                        bz = beta(b1, c)[k]
                        if bz:
                            row[c * n + b2] -= bz
                if any(row):
                    rows.append(row)
    return n * n - exact.rank(rows)
