"""Exact arithmetic in the cyclotomic integers Z[zeta_e].

Elements are stored in the power basis 1, z, ..., z^(phi(e)-1) of
Z[x]/(Phi_e(x)), which makes equality a plain comparison of coefficient
tuples once both operands share a conductor.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence, Tuple


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficient lists, low degree first).

    The divisor must be monic.
    """
    num = list(num)
    dn = len(den) - 1
    assert den[-1] == 1
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            q[i - dn] = c
            for j, dj in enumerate(den):
                num[i - dn + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("polynomial division is not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> Tuple[int, ...]:
    """Coefficients of Phi_e, lowest degree first.

    Computed by dividing x^e - 1 by Phi_d for every proper divisor d of e.
    """
    if e < 1:
        raise ValueError(f"conductor must be positive, got {e}")
    poly = [-1] + [0] * (e - 1) + [1]
    for d in _divisors(e)[:-1]:
        poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _degree(e: int) -> int:
    return len(cyclotomic_polynomial(e)) - 1


@lru_cache(maxsize=None)
def _power_table(e: int) -> Tuple[Tuple[int, ...], ...]:
    """Row k holds the reduction of x^k modulo Phi_e, for 0 <= k < e."""
    phi = cyclotomic_polynomial(e)
    n = len(phi) - 1
    rows = []
    cur = [1] + [0] * (n - 1) if n else []
    for _ in range(e):
        rows.append(tuple(cur))
        # multiply by x and reduce: x^n = -(phi_0 + ... + phi_{n-1} x^{n-1})
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(n):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(e: int, coeffs: Sequence[int]) -> Tuple[int, ...]:
    """Reduce an arbitrary-length coefficient list modulo Phi_e."""
    n = _degree(e)
    table = _power_table(e)
    out = [0] * n
    for k, c in enumerate(coeffs):
        if not c:
            continue
        if k < n:
            out[k] += c
        else:
            row = table[k % e]
            for j in range(n):
                if row[j]:
                    out[j] += c * row[j]
    return tuple(out)


class CycInt:
    """An element of Z[zeta_e], immutable."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence[int]):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        n = _degree(conductor)
        if len(coeffs) != n:
            coeffs = _reduce(conductor, coeffs)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def integer(cls, n: int, conductor: int = 1) -> "CycInt":
        return cls(conductor, [n] + [0] * (_degree(conductor) - 1))

    @classmethod
    def zeta(cls, e: int, k: int = 1) -> "CycInt":
        """zeta_e ** k."""
        return cls(e, _power_table(e)[k % e])

    @classmethod
    def from_exponents(cls, e: int, terms: dict[int, int]) -> "CycInt":
        """Sum of c * zeta_e**k over the mapping k -> c."""
        vec = [0] * e
        for k, c in terms.items():
            vec[k % e] += c
        return cls(e, _reduce(e, vec))

    # -- conductor handling -------------------------------------------
    def lift(self, conductor: int) -> "CycInt":
        """Embed into Z[zeta_m] for a multiple m of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        k = conductor // self.conductor
        vec = [0] * conductor
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % conductor] += c
        return CycInt(conductor, _reduce(conductor, vec))

    def descend(self, d: int) -> Optional["CycInt"]:
        """The same number written over conductor d, or None if it is not in Z[zeta_d]."""
        m = self.conductor
        if d == m:
            return self
        if m % d:
            L = _lcm(m, d)
            return self.lift(L).descend(d)
        cols, inv = _descent_data(m, d)
        a = self.coeffs
        picked = [a[c] for c in cols]
        b = []
        for j in range(len(inv[0]) if inv else 0):
            s = sum(Fraction(x) * row[j] for x, row in zip(picked, inv))
            if s.denominator != 1:
                return None
            b.append(int(s))
        cand = CycInt(d, b) if b else CycInt.integer(0, d)
        if cand.lift(m) != self:
            return None
        return cand

    def _harmonize(self, other: "CycInt") -> Tuple["CycInt", "CycInt"]:
        if self.conductor == other.conductor:
            return self, other
        m = _lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    @staticmethod
    def _coerce(x) -> "CycInt":
        if isinstance(x, CycInt):
            return x
        if isinstance(x, int):
            return CycInt.integer(x)
        return NotImplemented

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._harmonize(other)
        return CycInt(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.conductor, tuple(other * c for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._harmonize(other)
        return CycInt(a.conductor, _reduce(a.conductor, poly_mul(a.coeffs, b.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = CycInt.integer(1, self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "CycInt":
        """Complex conjugation, zeta -> zeta^-1."""
        e = self.conductor
        vec = [0] * e
        for i, c in enumerate(self.coeffs):
            vec[(-i) % e] += c
        return CycInt(e, _reduce(e, vec))

    def galois(self, k: int) -> "CycInt":
        """The automorphism zeta -> zeta^k, k coprime to the conductor."""
        e = self.conductor
        if gcd(k, e) != 1:
            raise ValueError("exponent must be coprime to the conductor")
        vec = [0] * e
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % e] += c
        return CycInt(e, _reduce(e, vec))

    def exact_div(self, n: int) -> "CycInt":
        """Divide by a rational integer; raises ArithmeticError if inexact."""
        if n == 0:
            raise ZeroDivisionError
        if any(c % n for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {n}")
        return CycInt(self.conductor, tuple(c // n for c in self.coeffs))

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_rational_integer(self) -> Optional[int]:
        """The integer n if this element equals n, otherwise None."""
        c = self.coeffs
        if any(c[1:]):
            return None
        return c[0] if c else 0

    def __complex__(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(c * z**i for i, c in enumerate(self.coeffs))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._harmonize(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # trace / phi(e) does not depend on the conductor the value lives in
        return hash(Fraction(_trace(self), _degree(self.conductor)))

    def __repr__(self):
        n = self.as_rational_integer()
        if n is not None:
            return str(n)
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mon = "1" if i == 0 else (f"z{self.conductor}" if i == 1 else f"z{self.conductor}^{i}")
            if mon == "1":
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": list(self.coeffs)}


@lru_cache(maxsize=None)
def _trace_row(e: int) -> Tuple[int, ...]:
    """Trace of x^i down to Q, for 0 <= i < phi(e)."""
    units = [k for k in range(1, e + 1) if gcd(k, e) == 1]
    out = []
    for i in range(_degree(e)):
        vec = [0] * e
        for k in units:
            vec[(i * k) % e] += 1
        out.append(_reduce(e, vec)[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _descent_data(m: int, d: int):
    """Pivot columns and inverse of the lifted power basis of Z[zeta_d] in Z[zeta_m].

    Writing B for the phi(d) x phi(m) matrix of lifted basis rows, b B = a is
    solved as b = a[cols] inv where inv inverts B restricted to ``cols``.
    """
    n = _degree(d)
    rows = [list(CycInt.zeta(d, j).lift(m).coeffs) for j in range(n)]
    width = _degree(m)
    # Gaussian elimination to find n independent columns
    cols = []
    mat = [[Fraction(x) for x in r] for r in rows]
    for c in range(width):
        if len(cols) == n:
            break
        piv = next((i for i in range(len(cols), n) if mat[i][c] != 0), None)
        if piv is None:
            continue
        k = len(cols)
        mat[k], mat[piv] = mat[piv], mat[k]
        for i in range(n):
            if i != k and mat[i][c] != 0:
                f = mat[i][c] / mat[k][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[k])]
        cols.append(c)
    # square submatrix S = B[:, cols]; need S^-1 (n x n)
    S = [[Fraction(rows[i][c]) for c in cols] for i in range(n)]
    inv = _invert(S)
    return tuple(cols), inv


def _invert(S):
    n = len(S)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(S)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def _trace(a: CycInt) -> int:
    return sum(c * t for c, t in zip(a.coeffs, _trace_row(a.conductor)))


def cyc_arith(op: str, a: CycInt, b: Optional[CycInt] = None) -> CycInt:
    """Dispatch helper for the ring operations by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown operation {op!r}")


def cyc_as_rational_integer(a: CycInt) -> Optional[int]:
    return a.as_rational_integer()


ZERO = CycInt.integer(0)
ONE = CycInt.integer(1)
