"""Exact linear algebra over the integers, the rationals, and GF(2).

Everything here is deterministic and allocation-light: matrices are tuples of
tuples, ranks and determinants of integer matrices go through fraction-free
(Bareiss) elimination, and anything that genuinely needs division is done with
fractions.Fraction.  GF(2) vectors are plain ints with bit (width-1-j) holding
coordinate j, so lexicographic order on coordinate tuples equals numeric order
on the encodings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = int | Fraction


@dataclass(frozen=True)
class IntMatrix:
    """Immutable matrix with int or Fraction entries."""

    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise ValueError("ragged matrix")

    @staticmethod
    def from_rows(rows: Iterable[Sequence[Scalar]]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(r) for r in rows))

    @staticmethod
    def zero(n: int, m: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * m for _ in range(n)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        return self.rows[ij[0]][ij[1]]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else ())

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c: Scalar) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = other.transpose().rows
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                               for row in self.rows))

    def apply(self, vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
        if self.ncols != len(vec):
            raise ValueError("shape mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.rows)

    def trace(self) -> Scalar:
        return sum(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def rank(self) -> int:
        return rank(self.rows)

    def det(self) -> Scalar:
        return det(self.rows)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)


def _integer_rows(rows: Sequence[Sequence[Scalar]]) -> list[list[int]]:
    """Clear denominators row by row; row scaling preserves rank."""
    out = []
    for row in rows:
        lcm = 1
        for a in row:
            if isinstance(a, Fraction):
                d = a.denominator
                lcm = lcm * d // _gcd(lcm, d)
        out.append([int(a * lcm) for a in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank via fraction-free (Bareiss) elimination on integer rows."""
    m = _integer_rows(rows)
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def det(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    """Determinant; Bareiss for integer input, Fraction elimination otherwise."""
    n = len(rows)
    if n == 0:
        return 1
    if len(rows[0]) != n:
        raise ValueError("det of non-square matrix")
    if all(isinstance(a, int) for r in rows for a in r):
        m = [list(r) for r in rows]
        prev = 1
        sign = 1
        for c in range(n - 1):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            for i in range(c + 1, n):
                for j in range(c + 1, n):
                    m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
                m[i][c] = 0
            prev = m[c][c]
        return sign * m[n - 1][n - 1]
    rr, pivots, d = _rref([list(map(Fraction, r)) for r in rows])
    if len(pivots) < n:
        return 0
    return d


def _rref(m: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int], Fraction]:
    """In-place reduced row echelon form; returns (rows, pivot columns, det factor).

    The det factor is the product of pivots times the row-swap sign, valid for
    square input; callers that only need rank or pivots ignore it.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    detf = Fraction(1)
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            detf = -detf
        detf *= m[r][c]
        inv = Fraction(1) / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots, detf


def rref(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(a) for a in r] for r in rows]
    if not m:
        return [], []
    red, pivots, _ = _rref(m)
    return red, pivots


def rank_fraction(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank by plain Fraction elimination; slower cross-check for rank()."""
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, echelon-ordered, deterministic."""
    if not rows:
        n = ncols or 0
        return [tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)]
    red, pivots = rref(rows)
    nc = len(rows[0])
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nc
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][f]
        basis.append(tuple(vec))
    return basis


def solve(a: IntMatrix, b: Sequence[Scalar]) -> tuple[Fraction, ...] | None:
    """One exact solution of a x = b, or None if inconsistent."""
    aug = [list(map(Fraction, row)) + [Fraction(bv)] for row, bv in zip(a.rows, b)]
    red, pivots, _ = _rref(aug)
    nc = a.ncols
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for r, c in enumerate(pivots):
        x[c] = red[r][nc]
    return tuple(x)


def inverse(a: IntMatrix) -> IntMatrix | None:
    """Exact inverse over the rationals, or None if singular."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError("inverse of non-square matrix")
    aug = [list(map(Fraction, row)) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(a.rows)]
    red, pivots, _ = _rref(aug)
    if pivots != list(range(n)):
        return None
    return IntMatrix(tuple(tuple(red[i][n:]) for i in range(n)))


def charpoly(a: IntMatrix) -> tuple[Scalar, ...]:
    """Coefficients of det(x I - A), highest degree first, via Faddeev-LeVerrier."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError("charpoly of non-square matrix")
    coeffs: list[Fraction] = [Fraction(1)]
    mk = IntMatrix.identity(n)
    for k in range(1, n + 1):
        mk = a @ mk
        c = Fraction(-mk.trace(), k)
        coeffs.append(c)
        mk = mk + IntMatrix.identity(n).scale(c)
    out: list[Scalar] = []
    for c in coeffs:
        f = Fraction(c)
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


# ---------------------------------------------------------------------------
# GF(2) vectors: int encodings with coordinate j at bit (width-1-j).

def gf2_from_bits(bits: Sequence[int], width: int) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b & 1:
            v |= 1 << (width - 1 - j)
    return v


def gf2_to_bits(v: int, width: int) -> tuple[int, ...]:
    return tuple((v >> (width - 1 - j)) & 1 for j in range(width))


def gf2_from_support(positions: Iterable[int], width: int) -> int:
    v = 0
    for j in positions:
        v |= 1 << (width - 1 - j)
    return v


def gf2_echelon(vectors: Iterable[int]) -> list[int]:
    """Reduced basis of the span, sorted by decreasing leading bit."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            top = 1 << (b.bit_length() - 1)
            if v & top:
                v ^= b
        if v:
            basis.append(v)
            basis.sort(key=int.bit_length, reverse=True)
    # back-substitute to reduced form
    for i, b in enumerate(basis):
        for j in range(i):
            top = 1 << (b.bit_length() - 1)
            if basis[j] & top:
                basis[j] ^= b
    return basis


def gf2_reduce(v: int, basis: Sequence[int]) -> int:
    """Lexicographically least member of the coset v + span(basis).

    With the leftmost-coordinate-is-highest-bit encoding, greedy elimination
    of leading bits is provably minimal.
    """
    for b in basis:
        top = 1 << (b.bit_length() - 1)
        if v & top:
            v ^= b
    return v


def gf2_solve_min(equations: Sequence[tuple[int, int]], width: int) -> int | None:
    """Lex-least solution x of the GF(2) system {mask . x = rhs}, or None.

    Each equation is (mask, rhs) with mask an encoded row vector.  The returned
    encoding prefers 0 in the earliest coordinates.
    """
    rows = [(m, r & 1) for m, r in equations]
    basis: list[tuple[int, int]] = []  # echelon rows (mask, rhs), decreasing leading bit
    for m, r in rows:
        for bm, br in basis:
            top = 1 << (bm.bit_length() - 1)
            if m & top:
                m ^= bm
                r ^= br
        if m:
            basis.append((m, r))
            basis.sort(key=lambda t: t[0].bit_length(), reverse=True)
        elif r:
            return None
    # particular solution: free coordinates 0, pivots by back-substitution
    x = 0
    for bm, br in sorted(basis, key=lambda t: t[0].bit_length()):
        top = 1 << (bm.bit_length() - 1)
        parity = bin(bm & x).count("1") & 1
        if parity ^ br:
            x ^= top
    # lex-minimize over the homogeneous solution space
    null = gf2_nullspace([m for m, _ in basis], width)
    return gf2_reduce(x, null)


def gf2_nullspace(masks: Sequence[int], width: int) -> list[int]:
    """Reduced basis of {x : mask . x = 0 for all masks}."""
    basis = gf2_echelon(masks)
    pivots = [width - b.bit_length() for b in basis]
    pivot_set = set(pivots)
    out = []
    for f in range(width):
        if f in pivot_set:
            continue
        fbit = 1 << (width - 1 - f)
        vec = fbit
        for b, pc in zip(basis, pivots):
            if b & fbit:
                vec |= 1 << (width - 1 - pc)
        out.append(vec)
    return gf2_echelon(out)
