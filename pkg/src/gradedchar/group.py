"""Finite groups as explicit multiplication tables.

Everything downstream (characters, transfers, G-sets) only ever needs groups
of a few hundred elements at most, so a full Cayley table is the simplest
exact representation.  Element 0 is always the identity.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Optional, Sequence

SUBGROUP_LATTICE_BOUND = 200


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """Abstract description of a catalog group.

    kind is one of "cyclic", "dihedral", "quaternion8", "alternating4",
    "psl2" or "product"; ``n`` carries the parameter and ``factors`` the
    operands of a direct product (left associated).
    """

    kind: str
    n: int = 0
    factors: tuple = ()

    def __str__(self) -> str:
        if self.kind == "cyclic":
            return f"C{self.n}"
        if self.kind == "dihedral":
            return f"D{self.n}"
        if self.kind == "quaternion8":
            return "Q8"
        if self.kind == "alternating4":
            return "A4"
        if self.kind == "psl2":
            return f"PSL(2,{self.n})"
        return "x".join(str(f) for f in self.factors)

    def validate(self) -> None:
        if self.kind in ("cyclic", "dihedral") and self.n < 1:
            raise GroupError(f"{self.kind} group needs a positive parameter, got {self.n}")
        if self.kind == "psl2" and not (self.n > 2 and is_prime(self.n)):
            raise GroupError(f"PSL(2,p) needs an odd prime p, got {self.n}")
        if self.kind == "product":
            if len(self.factors) < 2:
                raise GroupError("a product needs at least two factors")
            for f in self.factors:
                f.validate()
        if self.kind not in ("cyclic", "dihedral", "quaternion8", "alternating4", "psl2", "product"):
            raise GroupError(f"unknown group kind {self.kind!r}")


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", n)


def dihedral(n: int) -> GroupSpec:
    return GroupSpec("dihedral", n)


def quaternion8() -> GroupSpec:
    return GroupSpec("quaternion8")


def alternating4() -> GroupSpec:
    return GroupSpec("alternating4")


def psl2(p: int) -> GroupSpec:
    return GroupSpec("psl2", p)


def product(*specs: GroupSpec) -> GroupSpec:
    flat = []
    for s in specs:
        flat.extend(s.factors if s.kind == "product" else (s,))
    return GroupSpec("product", factors=tuple(flat))


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            if d not in out:
                out.append(d)
            n //= d
        d += 1
    if n > 1 and n not in out:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


class FiniteGroup:
    """A group given by its multiplication table.

    ``parent`` and ``embedding`` are set for groups that were carved out of a
    larger group (see :meth:`Subgroup.as_group`); ``embedding[i]`` is then the
    parent index of local element ``i``.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        spec: Optional[GroupSpec] = None,
        parent: Optional["FiniteGroup"] = None,
        embedding: Optional[Sequence[int]] = None,
        components: Optional[Sequence[tuple]] = None,
        factor_groups: Optional[Sequence["FiniteGroup"]] = None,
    ):
        self.table = [list(row) for row in table]
        self.order = n = len(self.table)
        if any(self.table[0][i] != i or self.table[i][0] != i for i in range(n)):
            raise GroupError("element 0 must be the identity")
        self.inverse = [0] * n
        for i in range(n):
            row = self.table[i]
            for j in range(n):
                if row[j] == 0:
                    self.inverse[i] = j
                    break
            else:
                raise GroupError(f"element {i} has no inverse")
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
        self.spec = spec
        self.parent = parent
        self.embedding = tuple(embedding) if embedding is not None else None
        # for direct products: components[i] is the tuple of factor indices
        self.components = [tuple(c) for c in components] if components is not None else None
        self.factor_groups = list(factor_groups) if factor_groups is not None else None
        self._tables = {}

    def __repr__(self):
        name = str(self.spec) if self.spec is not None else f"group of order {self.order}"
        return f"<FiniteGroup {name}>"

    @property
    def name(self) -> str:
        return str(self.spec) if self.spec is not None else f"G{self.order}"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        t = self.table
        return t[t[g][h]][self.inverse[g]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.table[result][base]
            base = self.table[base][base]
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return out

    @cached_property
    def exponent(self) -> int:
        return reduce(lambda x, y: x * y // gcd(x, y), self.element_orders, 1)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def check_axioms(self, samples: int = 2000, seed: int = 0) -> None:
        """Associativity: exhaustive up to order 64, sampled above."""
        n, t = self.order, self.table
        if n <= 64:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"associativity fails on ({a},{b},{c})")
        for a in range(n):
            if t[a][self.inverse[a]] != 0 or t[self.inverse[a]][a] != 0:
                raise GroupError(f"inverse table inconsistent at {a}")

    # -- conjugacy --------------------------------------------------------
    @cached_property
    def classes(self) -> "ConjClassData":
        return conjugacy_data(self)

    # -- subgroups --------------------------------------------------------
    def closure(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, _closure_mask(self, gens))

    def whole(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1)

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        mask = 0
        for e in elements:
            mask |= 1 << e
        sub = Subgroup(self, mask)
        if not sub.is_closed():
            raise GroupError("element set is not a subgroup")
        return sub

    # -- cosets -------------------------------------------------------
    def left_cosets(self, H: "Subgroup") -> list[tuple[int, ...]]:
        """Left cosets gH, ordered by least element; each coset sorted."""
        seen, out = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            coset = tuple(sorted(self.table[g][h] for h in H.elements))
            seen.update(coset)
            out.append(coset)
        return out


def _closure_mask(G: FiniteGroup, gens: Iterable[int]) -> int:
    gens = [g for g in set(gens) if g != 0]
    mask = 1
    frontier = [0]
    t = G.table
    while frontier:
        new = []
        for x in frontier:
            row = t[x]
            for g in gens:
                y = row[g]
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    new.append(y)
        frontier = new
    return mask


def _mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class Subgroup:
    """A subgroup of a fixed parent group, stored as a bitmask of elements."""

    __slots__ = ("parent", "mask", "elements", "__dict__")

    def __init__(self, parent: FiniteGroup, mask: int):
        self.parent = parent
        self.mask = mask
        self.elements = _mask_elements(mask)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return (self.mask >> g) & 1 == 1

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.mask != other.mask

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent.name}: {list(self.elements)[:8]}{'...' if self.order > 8 else ''}>"

    def sort_key(self):
        return (self.order, self.elements)

    def is_closed(self) -> bool:
        if not 0 in self:
            return False
        t = self.parent.table
        els = self.elements
        return all((self.mask >> t[a][b]) & 1 for a in els for b in els)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.parent.table
        els = self.elements
        return all(t[a][b] == t[b][a] for a in els for b in els)

    def conjugate(self, g: int) -> "Subgroup":
        """g H g^-1."""
        G = self.parent
        mask = 0
        for h in self.elements:
            mask |= 1 << G.conj(g, h)
        return Subgroup(G, mask)

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, _closure_mask(self.parent, self.elements + other.elements))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.mask & other.mask)

    def is_normal(self) -> bool:
        G = self.parent
        return all(self.conjugate(g) == self for g in range(G.order))

    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def position(self) -> dict[int, int]:
        """Parent element -> local index in :meth:`as_group`."""
        return {g: i for i, g in enumerate(self.elements)}

    def table(self):
        """Character table of this subgroup (on its local group)."""
        from .chartab import subgroup_table

        return subgroup_table(self)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone FiniteGroup (cached).

        Local index i corresponds to parent element ``self.elements[i]``; the
        identity stays at position 0 because elements are sorted.
        """
        cached = self.__dict__.get("_as_group")
        if cached is not None:
            return cached
        G = self.parent
        shared = G.__dict__.setdefault("_local_groups", {})
        if self.mask in shared:
            self.__dict__["_as_group"] = shared[self.mask]
            return shared[self.mask]
        pos = {g: i for i, g in enumerate(self.elements)}
        table = [[pos[G.table[a][b]] for b in self.elements] for a in self.elements]
        labels = [G.labels[g] for g in self.elements]
        H = FiniteGroup(table, labels, parent=G, embedding=self.elements)
        self.__dict__["_as_group"] = H
        shared[self.mask] = H
        return H


@dataclass
class ConjClassData:
    """Conjugacy classes with power maps.

    ``power_map[k][c]`` is the class of g^k for g in class c, for
    0 <= k < exponent (k taken modulo the exponent).
    """

    class_of: list[int]
    reps: list[int]
    sizes: list[int]
    members: list[tuple[int, ...]]
    power_map: list[list[int]]
    exponent: int

    def __len__(self):
        return len(self.reps)

    def power(self, k: int, c: int) -> int:
        return self.power_map[k % self.exponent][c]


def conjugacy_data(G: FiniteGroup) -> ConjClassData:
    n = G.order
    class_of = [-1] * n
    reps, sizes, members = [], [], []
    for g in range(n):
        if class_of[g] >= 0:
            continue
        orbit = sorted({G.conj(x, g) for x in range(n)})
        cid = len(reps)
        for h in orbit:
            class_of[h] = cid
        reps.append(g)  # least index, since we scan in order
        sizes.append(len(orbit))
        members.append(tuple(orbit))
    e = G.exponent
    power_map = [[class_of[G.power(r, k)] for r in reps] for k in range(e)]
    return ConjClassData(class_of, reps, sizes, members, power_map, e)


# ---------------------------------------------------------------------------
# catalog constructors


def _group_from_elements(elements: list, mul, labels, spec) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(table, labels, spec=spec)


def _cyclic_group(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    labels = ["1"] + ["a" if k == 1 else f"a^{k}" for k in range(1, n)]
    return FiniteGroup(table, labels, spec=cyclic(n))


def _dihedral_group(n: int) -> FiniteGroup:
    # (k, s) stands for r^k s^s; elements ordered rotations first
    elements = [(k, 0) for k in range(n)] + [(k, 1) for k in range(n)]

    def mul(a, b):
        k1, s1 = a
        k2, s2 = b
        if s1 == 0:
            return ((k1 + k2) % n, s2)
        return ((k1 - k2) % n, 1 - s2)

    labels = [("r^%d" % k if k else "1") if s == 0 else ("r^%d s" % k if k else "s") for k, s in elements]
    return _group_from_elements(elements, mul, labels, dihedral(n))


def _quaternion_group() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1,i,j,k
    names = ["1", "i", "j", "k"]
    mult = {
        ("1", x): (1, x) for x in names
    }
    mult.update({(x, "1"): (1, x) for x in names})
    mult.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elements = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]

    def mul(a, b):
        s, x = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, x)

    labels = [("" if s == 1 else "-") + x for s, x in elements]
    return _group_from_elements(elements, mul, labels, quaternion8())


def _alternating4() -> FiniteGroup:
    def parity(p):
        inv = sum(1 for i in range(4) for j in range(i) if p[j] > p[i])
        return inv % 2

    elements = sorted(p for p in itertools.permutations(range(4)) if parity(p) == 0)

    def mul(a, b):
        # (a*b)(x) = a(b(x))
        return tuple(a[b[x]] for x in range(4))

    def label(p):
        seen, cycles = set(), []
        for s in range(4):
            if s in seen or p[s] == s:
                seen.add(s)
                continue
            c, x = [], s
            while x not in seen:
                seen.add(x)
                c.append(str(x + 1))
                x = p[x]
            cycles.append("(" + "".join(c) + ")")
        return "".join(cycles) or "1"

    return _group_from_elements(elements, mul, [label(p) for p in elements], alternating4())


def _psl2(p: int) -> FiniteGroup:
    def normalize(m):
        a, b, c, d = m
        # representative of {m, -m}: first nonzero entry at most (p-1)/2
        for x in (a, b, c, d):
            if x:
                if x > (p - 1) // 2:
                    return tuple((-y) % p for y in m)
                return m
        raise AssertionError

    elements = set()
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            elements.add(normalize((a, b, c, d)))
    ident = (1, 0, 0, 1)
    elements = [ident] + sorted(elements - {ident})

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return normalize(((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p))

    labels = ["[%d %d; %d %d]" % m for m in elements]
    return _group_from_elements(elements, mul, labels, psl2(p))


def _direct_product(groups: list[FiniteGroup], spec: GroupSpec) -> FiniteGroup:
    comps = list(itertools.product(*[range(g.order) for g in groups]))
    index = {c: i for i, c in enumerate(comps)}
    table = [
        [index[tuple(g.table[x][y] for g, x, y in zip(groups, a, b))] for b in comps]
        for a in comps
    ]
    labels = ["(" + ",".join(g.labels[x] for g, x in zip(groups, c)) + ")" for c in comps]
    return FiniteGroup(table, labels, spec=spec, components=comps, factor_groups=groups)


_CATALOG: dict = {}


def build_catalog_group(spec: GroupSpec) -> FiniteGroup:
    """Construct a catalog group with a deterministic element ordering.

    Results are memoized per spec, so derived data cached on the group
    (tables, filtrations, subgroup lattices) is shared between callers.
    """
    spec.validate()
    G = _CATALOG.get(spec)
    if G is None:
        G = _CATALOG[spec] = _build(spec)
    return G


def _build(spec: GroupSpec) -> FiniteGroup:
    if spec.kind == "cyclic":
        return _cyclic_group(spec.n)
    if spec.kind == "dihedral":
        return _dihedral_group(spec.n)
    if spec.kind == "quaternion8":
        return _quaternion_group()
    if spec.kind == "alternating4":
        return _alternating4()
    if spec.kind == "psl2":
        return _psl2(spec.n)
    return _direct_product([build_catalog_group(f) for f in spec.factors], spec)


# ---------------------------------------------------------------------------
# subgroup machinery


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    seen = {}
    for g in range(G.order):
        s = G.closure([g])
        seen.setdefault(s.mask, s)
    return sorted(seen.values(), key=Subgroup.sort_key)


def subgroup_lattice(G: FiniteGroup, up_to_conjugacy: bool = False) -> list[Subgroup]:
    """All subgroups of G, sorted by (order, elements).

    Starts from the cyclic subgroups and closes under pairwise joins until no
    new subgroup appears; every subgroup is a join of cyclic ones, so the
    result is complete.
    """
    if G.order > SUBGROUP_LATTICE_BOUND:
        raise GroupError(f"group of order {G.order} exceeds the subgroup lattice bound {SUBGROUP_LATTICE_BOUND}")
    cache = G.__dict__.setdefault("_subgroup_cache", {})
    if "all" not in cache:
        found = {s.mask: s for s in cyclic_subgroups(G)}
        cyclics = list(found.values())
        frontier = list(cyclics)
        while frontier:
            new = []
            for a in frontier:
                for c in cyclics:
                    if c.mask & ~a.mask:
                        j = a.join(c)
                        if j.mask not in found:
                            found[j.mask] = j
                            new.append(j)
            frontier = new
        cache["all"] = sorted(found.values(), key=Subgroup.sort_key)
    subs = cache["all"]
    if not up_to_conjugacy:
        return list(subs)
    if "reps" not in cache:
        cache["reps"] = [cls[0] for cls in conjugacy_classes_of_subgroups(G)]
    return list(cache["reps"])


def conjugacy_classes_of_subgroups(G: FiniteGroup) -> list[list[Subgroup]]:
    subs = subgroup_lattice(G)
    assigned = set()
    out = []
    for s in subs:
        if s.mask in assigned:
            continue
        cls = {}
        for g in range(G.order):
            c = s.conjugate(g)
            cls[c.mask] = c
        members = sorted(cls.values(), key=Subgroup.sort_key)
        assigned.update(cls)
        out.append(members)
    return out


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown deterministically inside normalizers."""
    target = p_part(G.order, p)
    P = G.trivial()
    while P.order < target:
        N = normalizer(G, P)
        for g in N.elements:
            if g in P:
                continue
            if G.power(g, p) in P:
                P = P.join(G.closure([g]))
                break
        else:  # pragma: no cover - impossible by Cauchy's theorem
            raise GroupError("Sylow search failed")
    return P


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    mask = 0
    for g in range(G.order):
        if H.conjugate(g) == H:
            mask |= 1 << g
    return Subgroup(G, mask)


def centralizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    t = G.table
    mask = 0
    for g in range(G.order):
        if all(t[g][h] == t[h][g] for h in H.elements):
            mask |= 1 << g
    return Subgroup(G, mask)


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, G.whole())


def transversal(G: FiniteGroup, H: Subgroup) -> list[int]:
    """Least element of each left coset gH, in increasing order."""
    return [c[0] for c in G.left_cosets(H)]


def double_cosets(G: FiniteGroup, K: Subgroup, H: Subgroup) -> list[int]:
    """Least-index representatives of the double cosets K g H."""
    t = G.table
    seen = 0
    reps = []
    for g in range(G.order):
        if (seen >> g) & 1:
            continue
        reps.append(g)
        for k in K.elements:
            kg = t[k][g]
            for h in H.elements:
                seen |= 1 << t[kg][h]
    return reps


def double_coset(G: FiniteGroup, K: Subgroup, g: int, H: Subgroup) -> frozenset:
    t = G.table
    return frozenset(t[t[k][g]][h] for k in K.elements for h in H.elements)


def abelian_invariants_of(G: FiniteGroup, S: Optional[Subgroup] = None) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian group (or subgroup).

    For each prime p, the number of elements of order dividing p^k is
    p^(sum_i min(a_i, k)), which pins down the exponents a_i.
    """
    els = S.elements if S is not None else tuple(range(G.order))
    orders = [G.element_orders[g] for g in els]
    n = len(els)
    per_prime = {}
    for p in prime_factors(n):
        logs = [0]
        k = 1
        while p ** logs[-1] < p_part(n, p):
            c = sum(1 for o in orders if (p**k) % o == 0)
            logs.append(_exact_log(c, p))
            k += 1
        # ge[k-1] = number of cyclic factors with exponent >= k
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        exps = []
        for k in range(1, len(ge)):
            exps.extend([k] * (ge[k - 1] - ge[k]))
        per_prime[p] = sorted(exps)
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = [1] * width
    for p, exps in per_prime.items():
        exps = [0] * (width - len(exps)) + exps
        for i, a in enumerate(exps):
            factors[i] *= p**a
    return tuple(factors)


def _exact_log(c: int, p: int) -> int:
    k = 0
    while c > 1:
        if c % p:
            raise GroupError("element count is not a prime power")
        c //= p
        k += 1
    return k


def factor_subgroup(G: FiniteGroup, positions: Iterable[int]) -> Subgroup:
    """Elements of a direct product that are trivial outside the given factors."""
    if G.components is None:
        raise GroupError("not a direct product")
    keep = set(positions)
    mask = 0
    for g, comp in enumerate(G.components):
        if all(c == 0 for i, c in enumerate(comp) if i not in keep):
            mask |= 1 << g
    return Subgroup(G, mask)
