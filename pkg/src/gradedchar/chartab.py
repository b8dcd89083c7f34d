"""Exact complex character tables.

Tables are built from structural witnesses rather than a generic algorithm:

* abelian groups via homomorphisms to roots of unity,
* dihedral groups, Q8 and A4 from generators satisfying their defining
  relations,
* internal direct products N x A by multiplying the factor tables.

Any group reachable this way (including subgroups of catalog groups) gets a
table; anything else raises :class:`TableUnavailable`.
"""
from __future__ import annotations

import threading
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from .cyclotomic import CycInt, _degree, _trace
from .group import FiniteGroup, Subgroup, subgroup_lattice


class TableUnavailable(LookupError):
    pass


class NotVirtualCharacter(ValueError):
    pass


_lock = threading.RLock()


@lru_cache(maxsize=None)
def _trace_of_powers(e: int) -> tuple[int, ...]:
    """Tr(zeta_e^t) down to Q for t in 0..e-1."""
    return tuple(_trace(CycInt.zeta(e, t)) for t in range(e))


class CharacterTable:
    """Irreducible characters of a finite group with exact values.

    ``values[i][c]`` is chi_i on class c, always stored at conductor
    ``exponent``.  Row 0 is the trivial character.
    """

    def __init__(self, group: FiniteGroup, values: Sequence[Sequence[CycInt]], how: str):
        self.group = group
        self.classes = group.classes
        self.exponent = e = group.exponent
        rows = [[v.lift(e) if v.conductor != e else v for v in row] for row in values]
        rows.sort(key=lambda row: _row_key(row))
        self.values = rows
        self.degrees = [row[0].as_rational_integer() for row in rows]
        self.how = how
        self.r = len(rows)
        if self.r != len(self.classes):
            raise AssertionError(f"{self.r} characters for {len(self.classes)} classes")
        if sum(d * d for d in self.degrees) != group.order:
            raise AssertionError("sum of squared degrees differs from the group order")
        self._weights = None
        self._struct = None
        self._init_lock = threading.Lock()

    def __repr__(self):
        return f"<CharacterTable of {self.group.name}, degrees {self.degrees}>"

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def class_sizes(self) -> list[int]:
        return self.classes.sizes

    def value(self, i: int, g: int) -> CycInt:
        """chi_i at group element g."""
        return self.values[i][self.classes.class_of[g]]

    def linear_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == 1]

    # -- inner products ----------------------------------------------------
    def inner_product(self, f: Sequence[CycInt], g: Sequence[CycInt]) -> CycInt:
        total = CycInt.integer(0, self.exponent)
        for size, a, b in zip(self.classes.sizes, f, g):
            total = total + (a * b.conj()) * size
        return total.exact_div(self.order)

    def _decomposition_weights(self):
        if self._weights is None:
            with self._init_lock:
                if self._weights is None:
                    e = self.exponent
                    m = _degree(e)
                    tr = _trace_of_powers(e)
                    weights = []
                    for row in self.values:
                        w = []
                        for size, v in zip(self.classes.sizes, row):
                            y = v.conj().coeffs
                            for k in range(m):
                                w.append(size * sum(yl * tr[(k + l) % e] for l, yl in enumerate(y) if yl))
                        weights.append(w)
                    self._weights = weights
        return self._weights

    def class_function(self, values: Sequence) -> list[CycInt]:
        """Normalize values (ints or CycInts) to the table's conductor."""
        e = self.exponent
        out = []
        for v in values:
            if isinstance(v, int):
                v = CycInt.integer(v, e)
            elif v.conductor != e:
                if e % v.conductor:
                    w = v.descend(e)
                    if w is None:
                        raise NotVirtualCharacter(f"value {v} does not live in Q(zeta_{e})")
                    v = w
                else:
                    v = v.lift(e)
            out.append(v)
        if len(out) != self.r:
            raise ValueError(f"class function needs {self.r} values, got {len(out)}")
        return out

    def decompose(self, f: Sequence) -> list[int]:
        """Integer coefficients a with f = sum a_i chi_i.

        Coefficients come from a trace formula, then the reconstruction is
        checked exactly, so anything that is not a virtual character is
        rejected.
        """
        f = self.class_function(f)
        weights = self._decomposition_weights()
        flat = [c for v in f for c in v.coeffs]
        denom = self.order * _degree(self.exponent)
        coeffs = []
        for w in weights:
            s = sum(a * b for a, b in zip(w, flat) if b)
            if s % denom:
                raise NotVirtualCharacter("inner product with an irreducible is not an integer")
            coeffs.append(s // denom)
        if self.evaluate(coeffs) != f:
            raise NotVirtualCharacter("class function is not an integral combination of irreducibles")
        return coeffs

    def evaluate(self, coeffs: Sequence[int]) -> list[CycInt]:
        """Class function of sum coeffs[i] chi_i."""
        m = _degree(self.exponent)
        out = []
        for c in range(self.r):
            acc = [0] * m
            for a, row in zip(coeffs, self.values):
                if a:
                    for k, x in enumerate(row[c].coeffs):
                        if x:
                            acc[k] += a * x
            out.append(CycInt(self.exponent, acc))
        return out

    def check_orthogonality(self) -> None:
        for i in range(self.r):
            for j in range(i, self.r):
                ip = self.inner_product(self.values[i], self.values[j])
                if ip != (1 if i == j else 0):
                    raise AssertionError(f"rows {i},{j} not orthonormal: {ip}")
        # column relations
        n = self.order
        for c in range(self.r):
            for d in range(c, self.r):
                s = CycInt.integer(0, self.exponent)
                for row in self.values:
                    s = s + row[c] * row[d].conj()
                want = n // self.classes.sizes[c] if c == d else 0
                if s != want:
                    raise AssertionError(f"columns {c},{d} fail orthogonality")

    # -- output ----------------------------------------------------------------
    def to_text(self) -> str:
        G = self.group
        head = ["class"] + [G.labels[r] for r in self.classes.reps]
        sizes = ["size"] + [str(s) for s in self.classes.sizes]
        lines = ["\t".join(head), "\t".join(sizes)]
        for i, row in enumerate(self.values):
            lines.append("\t".join([f"r{i}"] + [repr(v) for v in row]))
        return "\n".join(lines)

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.name,
            "order": G.order,
            "exponent": self.exponent,
            "classes": [
                {"representative": G.labels[r], "size": s}
                for r, s in zip(self.classes.reps, self.classes.sizes)
            ],
            "degrees": list(self.degrees),
            "rows": [[v.to_json() for v in row] for row in self.values],
        }


def _row_key(row: Sequence[CycInt]):
    degree = row[0].as_rational_integer()
    trivial = all(v.as_rational_integer() == 1 for v in row)
    return (degree, not trivial, tuple(v.coeffs for v in row))


def inner_product(table: CharacterTable, f, g) -> CycInt:
    return table.inner_product(table.class_function(f), table.class_function(g))


def decompose(table: CharacterTable, f) -> list[int]:
    return table.decompose(f)


# ---------------------------------------------------------------------------
# table construction


def character_table(G: FiniteGroup) -> CharacterTable:
    """Character table of G, cached on the group object."""
    cached = G.__dict__.get("_character_table")
    if cached is not None:
        return cached
    with _lock:
        cached = G.__dict__.get("_character_table")
        if cached is None:
            cached = _build_table(G)
            G.__dict__["_character_table"] = cached
    return cached


def subgroup_table(H: Subgroup) -> CharacterTable:
    """Table of a subgroup, on its local group (see Subgroup.as_group)."""
    if H.order == H.parent.order:
        return character_table(H.parent)
    return character_table(H.as_group())


def _build_table(G: FiniteGroup) -> CharacterTable:
    if G.is_abelian:
        return CharacterTable(G, _abelian_values(G), "abelian")
    for builder in (_dihedral_values, _quaternion_values, _alternating4_values):
        vals = builder(G)
        if vals is not None:
            return CharacterTable(G, vals, builder.__name__.strip("_").replace("_values", ""))
    split = _direct_factors(G)
    if split is not None:
        N, A = split
        return CharacterTable(G, _product_values(G, N, A), "product")
    raise TableUnavailable(f"no character table construction for {G!r}")


def _class_values(G: FiniteGroup, func) -> list[CycInt]:
    return [func(r) for r in G.classes.reps]


def _abelian_values(G: FiniteGroup) -> list[list[CycInt]]:
    e = G.exponent
    orders = G.element_orders
    # greedy generating set, largest orders first
    gens, span = [], G.trivial()
    for g in sorted(range(G.order), key=lambda x: (-orders[x], x)):
        if g not in span:
            gens.append(g)
            span = span.join(G.closure([g]))
            if span.order == G.order:
                break

    def try_assignment(assign):
        val = [None] * G.order
        val[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, a in zip(gens, assign):
                    y = G.table[x][g]
                    v = (val[x] + a) % e
                    if val[y] is None:
                        val[y] = v
                        nxt.append(y)
                    elif val[y] != v:
                        return None
            frontier = nxt
        return val

    import itertools

    choices = [[k * (e // orders[g]) for k in range(orders[g])] for g in gens]
    rows = []
    for assign in itertools.product(*choices):
        val = try_assignment(assign)
        if val is not None:
            rows.append(_class_values(G, lambda r: CycInt.zeta(e, val[r])))
    if len(rows) != G.order:
        raise AssertionError("dual group enumeration incomplete")
    return rows


def _dihedral_values(G: FiniteGroup) -> Optional[list[list[CycInt]]]:
    if G.order % 2 or G.order < 6:
        return None
    n = G.order // 2
    orders = G.element_orders
    r = next((g for g in range(G.order) if orders[g] == n), None)
    if r is None:
        return None
    R = G.closure([r])
    s = next((g for g in range(G.order) if g not in R and orders[g] == 2 and G.conj(g, r) == G.inv(r)), None)
    if s is None:
        return None
    # write every element as r^k or r^k s
    coords = {}
    x = 0
    for k in range(n):
        coords[x] = (k, 0)
        coords[G.table[x][s]] = (k, 1)
        x = G.table[x][r]
    if len(coords) != G.order:
        return None
    e = G.exponent
    rows = []
    signs = [(1, 1), (1, -1)] + ([(-1, 1), (-1, -1)] if n % 2 == 0 else [])
    for a, b in signs:
        rows.append(_class_values(G, lambda g: CycInt.integer(a ** coords[g][0] * (b if coords[g][1] else 1), e)))
    for j in range(1, (n - 1) // 2 + 1):
        def chi(g, j=j):
            k, refl = coords[g]
            if refl:
                return CycInt.integer(0, e)
            return CycInt.zeta(n, j * k) + CycInt.zeta(n, -j * k)
        rows.append(_class_values(G, chi))
    return rows


def _quaternion_values(G: FiniteGroup) -> Optional[list[list[CycInt]]]:
    if G.order != 8:
        return None
    orders = G.element_orders
    invols = [g for g in range(G.order) if orders[g] == 2]
    if len(invols) != 1:
        return None
    z = invols[0]
    i = next(g for g in range(G.order) if orders[g] == 4)
    j = next((g for g in range(G.order) if orders[g] == 4 and g not in G.closure([i])), None)
    if j is None or G.power(i, 2) != z or G.power(j, 2) != z or G.conj(j, i) != G.inv(i):
        return None
    coords = {}
    for a in range(4):
        for b in range(2):
            coords[G.table[G.power(i, a)][G.power(j, b)]] = (a, b)
    e = G.exponent
    rows = []
    for alpha in (1, -1):
        for beta in (1, -1):
            rows.append(_class_values(G, lambda g: CycInt.integer(alpha ** coords[g][0] * beta ** coords[g][1], e)))
    rows.append(_class_values(G, lambda g: CycInt.integer(2 if g == 0 else -2 if g == z else 0, e)))
    return rows


def _alternating4_values(G: FiniteGroup) -> Optional[list[list[CycInt]]]:
    if G.order != 12:
        return None
    orders = G.element_orders
    V = [0] + [g for g in range(G.order) if orders[g] == 2]
    if len(V) != 4 or sum(1 for o in orders if o == 3) != 8:
        return None
    Vs = G.subgroup(V) if _is_subgroup(G, V) else None
    if Vs is None:
        return None
    b = next(g for g in range(G.order) if orders[g] == 3)
    # every element is v * b^m
    expo = {}
    for m in range(3):
        bm = G.power(b, m)
        for v in V:
            expo[G.table[v][bm]] = m
    e = G.exponent
    rows = [
        _class_values(G, lambda g, k=k: CycInt.zeta(3, k * expo[g])) for k in range(3)
    ]
    rows.append(_class_values(G, lambda g: CycInt.integer({1: 3, 2: -1, 3: 0}[orders[g]], e)))
    return rows


def _is_subgroup(G: FiniteGroup, elements) -> bool:
    s = set(elements)
    return all(G.table[a][b] in s for a in s for b in s)


def _direct_factors(G: FiniteGroup) -> Optional[tuple[Subgroup, Subgroup]]:
    """A pair of commuting normal subgroups N, A with N x A = G, both with tables."""
    if G.factor_groups is not None:
        k = len(G.factor_groups)
        first = 0
        rest = 0
        for idx, comp in enumerate(G.components):
            if all(c == 0 for c in comp[1:]):
                first |= 1 << idx
            if comp[0] == 0:
                rest |= 1 << idx
        if k >= 2:
            return Subgroup(G, first), Subgroup(G, rest)
    subs = [s for s in subgroup_lattice(G) if 1 < s.order < G.order and s.is_normal()]
    t = G.table
    for N in subs:
        for A in subs:
            if N.order * A.order != G.order or N.mask & A.mask != 1:
                continue
            if all(t[a][b] == t[b][a] for a in N.elements for b in A.elements):
                try:
                    subgroup_table(N)
                    subgroup_table(A)
                except TableUnavailable:
                    continue
                return N, A
    return None


def _product_values(G: FiniteGroup, N: Subgroup, A: Subgroup) -> list[list[CycInt]]:
    tn, ta = subgroup_table(N), subgroup_table(A)
    posn = {g: i for i, g in enumerate(N.elements)}
    posa = {g: i for i, g in enumerate(A.elements)}
    split = {}
    for n in N.elements:
        for a in A.elements:
            split[G.table[n][a]] = (posn[n], posa[a])
    rows = []
    for i in range(tn.r):
        for j in range(ta.r):
            rows.append(_class_values(G, lambda g: tn.value(i, split[g][0]) * ta.value(j, split[g][1])))
    return rows


def structure_name(G: FiniteGroup) -> str:
    """Short isomorphism-type label for a group with a table (e.g. C2xC2, D5, Q8)."""
    from .group import abelian_invariants_of

    if G.order == 1:
        return "1"
    if G.is_abelian:
        return "x".join(f"C{d}" for d in abelian_invariants_of(G))
    try:
        how = character_table(G).how
    except TableUnavailable:
        how = None
    if how == "dihedral":
        return f"D{G.order // 2}"
    if how == "quaternion":
        return "Q8"
    if how == "alternating4":
        return "A4"
    if G.spec is not None and G.parent is None:
        return G.name
    return f"G{G.order}"


def subgroup_name(H: Subgroup) -> str:
    if H.order == H.parent.order:
        return structure_name(H.parent)
    return structure_name(H.as_group())
