"""Virtual characters and the lambda-ring structure of R(G)."""
from __future__ import annotations

import threading
from typing import Iterable, Sequence

from .chartab import CharacterTable


class TableMismatch(ValueError):
    pass


class VirtualCharacter:
    """Integer combination of the irreducible characters of one table."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: CharacterTable, coeffs: Iterable[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != table.r:
            raise ValueError(f"expected {table.r} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("VirtualCharacter is immutable")

    # constructors
    @classmethod
    def zero(cls, table: CharacterTable) -> "VirtualCharacter":
        return cls(table, [0] * table.r)

    @classmethod
    def one(cls, table: CharacterTable, n: int = 1) -> "VirtualCharacter":
        return cls(table, [n] + [0] * (table.r - 1))

    @classmethod
    def irreducible(cls, table: CharacterTable, i: int) -> "VirtualCharacter":
        v = [0] * table.r
        v[i] = 1
        return cls(table, v)

    @classmethod
    def from_class_function(cls, table: CharacterTable, values) -> "VirtualCharacter":
        return cls(table, table.decompose(values))

    # arithmetic
    def _other(self, other) -> "VirtualCharacter":
        if isinstance(other, int):
            return VirtualCharacter.one(self.table, other)
        if isinstance(other, VirtualCharacter):
            if other.table is not self.table:
                raise TableMismatch("virtual characters live on different tables")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return VirtualCharacter(self.table, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return VirtualCharacter(self.table, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return VirtualCharacter(self.table, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return VirtualCharacter(self.table, (other * a for a in self.coeffs))
        other = self._other(other)
        if other is NotImplemented:
            return other
        return vc_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = VirtualCharacter.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = VirtualCharacter.one(self.table, other)
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self.table is other.table and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.table), self.coeffs))

    def __repr__(self):
        out = ""
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            if not out:
                out = ("-" if c < 0 else "") + f"{mag}r{i}"
            else:
                out += (" - " if c < 0 else " + ") + f"{mag}r{i}"
        return out or "0"

    # queries
    def augmentation(self) -> int:
        return sum(c * d for c, d in zip(self.coeffs, self.table.degrees))

    degree = augmentation

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_actual(self) -> bool:
        """True if every coefficient is nonnegative (a genuine representation)."""
        return all(c >= 0 for c in self.coeffs)

    def values(self):
        return self.table.evaluate(self.coeffs)

    def positive_part(self) -> "VirtualCharacter":
        return VirtualCharacter(self.table, (max(c, 0) for c in self.coeffs))

    def negative_part(self) -> "VirtualCharacter":
        return VirtualCharacter(self.table, (max(-c, 0) for c in self.coeffs))


# ---------------------------------------------------------------------------
# per-table caches: structure constants and Adams maps

_cache_lock = threading.Lock()


class StructureConstants:
    """chi_i * chi_j = sum_k m[i][j][k] chi_k, stored sparsely."""

    def __init__(self, table: CharacterTable):
        r = table.r
        sparse = [[None] * r for _ in range(r)]
        for i in range(r):
            vi = table.values[i]
            for j in range(i, r):
                prod = [a * b for a, b in zip(vi, table.values[j])]
                dec = table.decompose(prod)
                entry = tuple((k, m) for k, m in enumerate(dec) if m)
                sparse[i][j] = sparse[j][i] = entry
        self.table = table
        self.sparse = sparse

    def dense(self) -> list[list[list[int]]]:
        r = self.table.r
        out = [[[0] * r for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for j in range(r):
                for k, m in self.sparse[i][j]:
                    out[i][j][k] = m
        return out


def structure_constants(table: CharacterTable) -> StructureConstants:
    sc = table.__dict__.get("_structure_constants")
    if sc is None:
        with _cache_lock:
            sc = table.__dict__.get("_structure_constants")
            if sc is None:
                sc = StructureConstants(table)
                table.__dict__["_structure_constants"] = sc
    return sc


def _adams_matrix(table: CharacterTable, k: int) -> list[tuple]:
    k %= table.exponent
    cache = table.__dict__.setdefault("_adams", {})
    m = cache.get(k)
    if m is None:
        with _cache_lock:
            m = cache.get(k)
            if m is None:
                pm = table.classes.power_map[k]
                m = []
                for row in table.values:
                    dec = table.decompose([row[pm[c]] for c in range(table.r)])
                    m.append(tuple((j, a) for j, a in enumerate(dec) if a))
                cache[k] = m
    return m


# ---------------------------------------------------------------------------
# ring operations


def _check_same(x: VirtualCharacter, y: VirtualCharacter) -> None:
    if x.table is not y.table:
        raise TableMismatch("virtual characters live on different tables")


def vc_add(x: VirtualCharacter, y: VirtualCharacter) -> VirtualCharacter:
    _check_same(x, y)
    return x + y


def vc_sub(x: VirtualCharacter, y: VirtualCharacter) -> VirtualCharacter:
    _check_same(x, y)
    return x - y


def vc_scale(n: int, x: VirtualCharacter) -> VirtualCharacter:
    return x * n


def vc_mul(x: VirtualCharacter, y: VirtualCharacter) -> VirtualCharacter:
    _check_same(x, y)
    sparse = structure_constants(x.table).sparse
    out = [0] * x.table.r
    xs = [(i, a) for i, a in enumerate(x.coeffs) if a]
    ys = [(j, b) for j, b in enumerate(y.coeffs) if b]
    for i, a in xs:
        row = sparse[i]
        for j, b in ys:
            ab = a * b
            for k, m in row[j]:
                out[k] += ab * m
    return VirtualCharacter(x.table, out)


def adams(k: int, x: VirtualCharacter) -> VirtualCharacter:
    """psi^k, with psi^k(chi)(g) = chi(g^k)."""
    if k < 1:
        raise ValueError("Adams operations are indexed by k >= 1")
    m = _adams_matrix(x.table, k)
    out = [0] * x.table.r
    for i, a in enumerate(x.coeffs):
        if a:
            for j, b in m[i]:
                out[j] += a * b
    return VirtualCharacter(x.table, out)


def lambda_series(x: VirtualCharacter, n: int) -> list[VirtualCharacter]:
    """[lambda^0(x), ..., lambda^n(x)] via Newton's identity."""
    lam = [VirtualCharacter.one(x.table)]
    psi = [None] + [adams(k, x) for k in range(1, n + 1)]
    for m in range(1, n + 1):
        acc = VirtualCharacter.zero(x.table)
        for k in range(1, m + 1):
            term = lam[m - k] * psi[k]
            acc = acc + term if k % 2 else acc - term
        if any(c % m for c in acc.coeffs):
            raise ArithmeticError(f"Newton recursion not divisible by {m}")
        lam.append(VirtualCharacter(x.table, (c // m for c in acc.coeffs)))
    return lam


def lambda_op(n: int, x: VirtualCharacter) -> VirtualCharacter:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return lambda_series(x, n)[n]


def gamma_op(n: int, x: VirtualCharacter) -> VirtualCharacter:
    """gamma^n(x) = lambda^n(x + n - 1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return VirtualCharacter.one(x.table)
    return lambda_op(n, x + (n - 1))


def gamma_series(x: VirtualCharacter, n: int) -> list[VirtualCharacter]:
    return [gamma_op(m, x) for m in range(n + 1)]


class NotARepresentation(ValueError):
    pass


def chern_rep(n: int, rho: VirtualCharacter) -> VirtualCharacter:
    """C_n(rho) = gamma^n(rho - eps(rho)) for an actual character rho."""
    if not rho.is_actual():
        raise NotARepresentation("Chern classes are only defined for actual characters")
    d = rho.augmentation()
    c = gamma_op(n, rho - d)
    if n > d and not c.is_zero():
        raise AssertionError(f"gamma-dimension bound violated: C_{n} of a degree-{d} character is nonzero")
    return c


def series_product(a: Sequence[VirtualCharacter], b: Sequence[VirtualCharacter], n: int) -> list[VirtualCharacter]:
    """Coefficients of (sum a_i t^i)(sum b_j t^j) up to t^n."""
    table = a[0].table
    out = []
    for m in range(n + 1):
        acc = VirtualCharacter.zero(table)
        for i in range(m + 1):
            acc = acc + a[i] * b[m - i]
        out.append(acc)
    return out
