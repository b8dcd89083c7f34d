"""Sublattices of Z^r in Hermite normal form, Smith forms and quotient data.

Row convention throughout: a lattice is the row span of its basis matrix and
linear maps act on row vectors from the right (v -> v A).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Optional, Sequence

Vector = tuple


class LatticeError(ValueError):
    pass


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


class _Echelon:
    """Row echelon basis keyed by pivot column, with exact gcd insertion."""

    def __init__(self, rank: int):
        self.rank = rank
        self.piv: dict[int, list[int]] = {}

    def insert(self, v: Sequence[int]) -> bool:
        """Add v to the span; returns True if the lattice grew."""
        v = list(v)
        piv = self.piv
        grew = False
        for col in range(self.rank):
            b = v[col]
            if not b:
                continue
            row = piv.get(col)
            if row is None:
                if b < 0:
                    v = [-x for x in v]
                piv[col] = v
                return True
            a = row[col]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
                continue
            g, s, t = _xgcd(a, b)
            new = [s * y + t * x for x, y in zip(v, row)]
            ag, bg = a // g, b // g
            v = [ag * x - bg * y for x, y in zip(v, row)]
            piv[col] = new
            grew = True
        return grew

    def reduce(self, v: Sequence[int]) -> tuple[list[int], dict[int, int]]:
        """Reduce v against pivots; returns the remainder and quotients used."""
        v = list(v)
        used = {}
        for col in sorted(self.piv):
            row = self.piv[col]
            q = v[col] // row[col]
            if q:
                used[col] = q
                v = [x - q * y for x, y in zip(v, row)]
        return v, used

    def canonical_rows(self) -> tuple[tuple[int, ...], ...]:
        cols = sorted(self.piv)
        rows = [list(self.piv[c]) for c in cols]
        # clear above each pivot into [0, pivot); ascending order so later
        # pivots never disturb columns already reduced
        for k in range(len(cols)):
            c = cols[k]
            p = rows[k][c]
            for i in range(k):
                q = rows[i][c] // p
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[k])]
        return tuple(tuple(r) for r in rows)


def hnf(vectors: Iterable[Sequence[int]], rank: int) -> tuple[tuple[int, ...], ...]:
    ech = _Echelon(rank)
    for v in vectors:
        if len(v) != rank:
            raise LatticeError(f"vector of length {len(v)} in rank {rank}")
        if any(v):
            ech.insert(v)
    return ech.canonical_rows()


class IntLattice:
    """A sublattice of Z^rank, stored as its canonical HNF basis."""

    __slots__ = ("rank", "basis", "_pivots")

    def __init__(self, rank: int, basis: tuple):
        self.rank = rank
        self.basis = basis
        self._pivots = tuple(next(i for i, x in enumerate(row) if x) for row in basis)

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[int]], rank: int) -> "IntLattice":
        return cls(rank, hnf(vectors, rank))

    @classmethod
    def full(cls, rank: int) -> "IntLattice":
        return cls(rank, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    @classmethod
    def zero(cls, rank: int) -> "IntLattice":
        return cls(rank, ())

    def __eq__(self, other):
        return isinstance(other, IntLattice) and self.rank == other.rank and self.basis == other.basis

    def __hash__(self):
        return hash((self.rank, self.basis))

    def __repr__(self):
        return f"IntLattice(rank={self.rank}, basis={[list(r) for r in self.basis]})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[int]) -> Optional[list[int]]:
        """Coefficients of v over the basis, or None if v is not in the lattice."""
        if len(v) != self.rank:
            raise LatticeError("rank mismatch")
        v = list(v)
        coords = []
        for row, c in zip(self.basis, self._pivots):
            p = row[c]
            if v[c] % p:
                return None
            q = v[c] // p
            coords.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        if any(v):
            return None
        return coords

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    __contains__ = contains

    def contains_lattice(self, other: "IntLattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __le__(self, other: "IntLattice") -> bool:
        return other.contains_lattice(self)

    def __add__(self, other: "IntLattice") -> "IntLattice":
        return lattice_sum(self, other)

    def index_in_full(self) -> Optional[int]:
        """|Z^rank / L| when finite."""
        if self.dim < self.rank:
            return None
        d = 1
        for row, c in zip(self.basis, self._pivots):
            d *= row[c]
        return d


def lattice_from_generators(vectors: Iterable[Sequence[int]], rank: int) -> IntLattice:
    return IntLattice.from_generators(vectors, rank)


def lattice_sum(*lattices: IntLattice) -> IntLattice:
    rank = lattices[0].rank
    if any(L.rank != rank for L in lattices):
        raise LatticeError("rank mismatch")
    return IntLattice.from_generators((b for L in lattices for b in L.basis), rank)


def lattice_contains(L: IntLattice, v: Sequence[int], witness: bool = False):
    coords = L.coordinates(v)
    if witness:
        return coords is not None, coords
    return coords is not None


def product_span(L1: IntLattice, L2: IntLattice, mul: Callable[[Sequence[int], Sequence[int]], Sequence[int]]) -> IntLattice:
    if L1.rank != L2.rank:
        raise LatticeError("rank mismatch")
    return IntLattice.from_generators((mul(a, b) for a in L1.basis for b in L2.basis), L1.rank)


def image_lattice(L: IntLattice, f: Callable[[Sequence[int]], Sequence[int]], rank: int) -> IntLattice:
    return IntLattice.from_generators((f(b) for b in L.basis), rank)


# ---------------------------------------------------------------------------
# finite abelian groups


def _factor(n: int) -> dict[int, int]:
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianInvariants:
    """Z^free_rank plus Z/d1 x ... with d1 | d2 | ..., every d > 1."""

    free_rank: int
    divisors: tuple

    @classmethod
    def from_divisors(cls, divisors: Iterable[int], free_rank: int = 0) -> "AbelianInvariants":
        """Normalize any list of cyclic orders (0 means Z) to invariant factors."""
        ds = list(divisors)
        free_rank += sum(1 for d in ds if d == 0)
        prime_powers: dict[int, list[int]] = {}
        for d in ds:
            if d in (0, 1):
                continue
            for p, k in _factor(abs(d)).items():
                prime_powers.setdefault(p, []).append(p**k)
        width = max((len(v) for v in prime_powers.values()), default=0)
        factors = [1] * width
        for p, qs in prime_powers.items():
            qs = [1] * (width - len(qs)) + sorted(qs)
            for i, q in enumerate(qs):
                factors[i] *= q
        return cls(free_rank, tuple(factors))

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.divisors

    def direct_sum(self, other: "AbelianInvariants") -> "AbelianInvariants":
        return AbelianInvariants.from_divisors(self.divisors + other.divisors, self.free_rank + other.free_rank)

    __add__ = direct_sum

    def p_part(self, p: int) -> "AbelianInvariants":
        out = []
        for d in self.divisors:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        return AbelianInvariants.from_divisors(out)

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.divisors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "divisors": list(self.divisors)}


# ---------------------------------------------------------------------------
# Smith normal form with column transforms


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int):
    """Diagonalize M by unimodular row and column operations.

    Returns (diag, V, Vinv) where U M V = D for some unimodular U; ``diag``
    has length min(rows, ncols), nonnegative, with d_i | d_{i+1} among the
    nonzero entries.
    """
    A = [list(r) for r in M]
    s, b = len(A), ncols
    V = [[int(i == j) for j in range(b)] for i in range(b)]
    Vinv = [[int(i == j) for j in range(b)] for i in range(b)]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_addmul(j, t, q):
        # column j -= q * column t
        for row in A:
            row[j] -= q * row[t]
        for row in V:
            row[j] -= q * row[t]
        Vinv[t] = [x + q * y for x, y in zip(Vinv[t], Vinv[j])]

    t = 0
    limit = min(s, b)
    while t < limit:
        best = None
        for i in range(t, s):
            for j in range(t, b):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            col_swap(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, s):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, b):
                q = A[t][j] // p
                if q:
                    col_addmul(j, t, q)
                if A[t][j]:
                    dirty = True
            if dirty:
                best = None
                for i in range(t, s):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, b):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                if i != t:
                    A[t], A[i] = A[i], A[t]
                if j != t:
                    col_swap(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, s) for j in range(t + 1, b) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        t += 1
    diag = [A[i][i] if i < s else 0 for i in range(limit)]
    return diag, V, Vinv


class QuotientPresentation:
    """The quotient big/small with explicit cyclic coordinates.

    For x in big (as ambient vector) with big-basis coordinates c, the
    quotient coordinates are y = c V, read modulo ``moduli`` (0 = free).
    ``generators[i]`` is an ambient lift of the i-th cyclic generator.
    """

    def __init__(self, big: IntLattice, small: IntLattice):
        if big.rank != small.rank:
            raise LatticeError("rank mismatch")
        rows = []
        for v in small.basis:
            c = big.coordinates(v)
            if c is None:
                raise LatticeError("small lattice is not contained in the big one")
            rows.append(c)
        b = big.dim
        diag, V, Vinv = smith_normal_form(rows, b)
        moduli = list(diag) + [0] * (b - len(diag))
        self.big, self.small = big, small
        self.V = V
        self.moduli = moduli
        self.generators = []
        for i in range(b):
            lift = [0] * big.rank
            for coef, row in zip(Vinv[i], big.basis):
                if coef:
                    lift = [x + coef * y for x, y in zip(lift, row)]
            self.generators.append(tuple(lift))
        self.invariants = AbelianInvariants.from_divisors([m for m in moduli if m != 1])
        # nontrivial coordinates only (moduli 1 are always zero)
        self.active = [i for i, m in enumerate(moduli) if m != 1]

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.big.coordinates(v)
        if c is None:
            raise LatticeError("vector is not in the big lattice")
        y = [sum(ci * self.V[k][i] for k, ci in enumerate(c)) for i in range(len(self.moduli))]
        return tuple((y[i] % self.moduli[i]) if self.moduli[i] else y[i] for i in self.active)

    def order(self, v: Sequence[int]) -> Optional[int]:
        """Additive order of the class of v; None when infinite."""
        out = 1
        for y, i in zip(self.coordinates(v), self.active):
            m = self.moduli[i]
            if m == 0:
                if y:
                    return None
                continue
            k = m // gcd(y, m)
            out = out * k // gcd(out, k)
        return out

    def is_zero(self, v: Sequence[int]) -> bool:
        return self.small.contains(v)

    def active_generators(self) -> list[tuple]:
        return [self.generators[i] for i in self.active]

    def active_moduli(self) -> list[int]:
        return [self.moduli[i] for i in self.active]


def quotient_invariants(big: IntLattice, small: IntLattice) -> tuple[AbelianInvariants, list[tuple]]:
    """Invariants of big/small and ambient lifts of matching generators."""
    q = QuotientPresentation(big, small)
    return q.invariants, q.active_generators()


def _apply(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    n = len(A[0]) if A else 0
    out = [0] * n
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return out


def left_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A basis of {x : x M = 0}, via the echelon form of [M | I]."""
    m = len(M)
    aug = [list(row) + [int(i == j) for j in range(m)] for i, row in enumerate(M)]
    rows = hnf(aug, ncols + m)
    return [list(r[ncols:]) for r in rows if not any(r[:ncols])]


def invariant_sublattice_of_quotient(
    big: IntLattice, small: IntLattice, endos: Sequence[Sequence[Sequence[int]]]
) -> tuple[AbelianInvariants, list[tuple], IntLattice]:
    """Fixed points of endomorphisms acting on big/small.

    ``endos`` are ambient matrices acting on row vectors.  Returns the
    invariants of the fixed subgroup, ambient lifts of its generators and the
    lattice S with small <= S <= big whose image is the fixed subgroup.
    """
    b = big.dim
    blocks_x, blocks_u = [], []
    small_rows = []
    for v in small.basis:
        c = big.coordinates(v)
        if c is None:
            raise LatticeError("small lattice is not contained in the big one")
        small_rows.append(c)
    for A in endos:
        # matrix of the endo on big-basis coordinates, minus identity
        rows = []
        for i, v in enumerate(big.basis):
            w = _apply(A, v)
            c = big.coordinates(w)
            if c is None:
                raise LatticeError("endomorphism does not preserve the big lattice")
            c[i] -= 1
            rows.append(c)
        for v in small.basis:
            if not small.contains(_apply(A, v)):
                raise LatticeError("endomorphism does not preserve the small lattice")
        blocks_x.append(rows)
    k = len(endos)
    if k == 0:
        S = big
    else:
        s = len(small_rows)
        M = []
        for i in range(b):
            M.append([x for blk in blocks_x for x in blk[i]])
        for j in range(k):
            for row in small_rows:
                M.append([0] * (b * j) + [-x for x in row] + [0] * (b * (k - j - 1)))
        ker = left_kernel(M, b * k)
        coords = [vec[:b] for vec in ker] + small_rows
        S_coords = hnf(coords, b)
        S = IntLattice.from_generators((_apply(big.basis, c) for c in S_coords), big.rank)
    q = QuotientPresentation(S, small)
    return q.invariants, q.active_generators(), S
