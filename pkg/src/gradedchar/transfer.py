"""Restriction, induction, conjugation and multiplicative transfer.

Subgroups are :class:`~gradedchar.group.Subgroup` objects of one ambient
group; a virtual character "over H" lives on ``H.table()``.

The second half implements norms of virtual characters along a normal
subgroup H of prime index p.  Bundles over the power set of K/H are stored
one entry per translation orbit of subsets (``VeeElement``); the product
``vee`` turns addition into a convolution over disjoint pairs of subsets, so
N(x - y) can be obtained by inverting chi(y).
"""
from __future__ import annotations

from math import comb
from typing import Optional, Sequence

from .chartab import CharacterTable
from .cyclotomic import CycInt
from .group import FiniteGroup, Subgroup, double_cosets, is_prime, transversal
from .vchar import VirtualCharacter


class TransferError(ValueError):
    pass


def _cache(G: FiniteGroup) -> dict:
    return G.__dict__.setdefault("_transfer_cache", {})


def _whole(H: Subgroup) -> Subgroup:
    return H.parent.whole()


def _check_on(x: VirtualCharacter, S: Subgroup, what: str) -> None:
    if x.table is not S.table():
        raise TransferError(f"{what} is not a character of the given subgroup")


def _apply_matrix(rows: Sequence[Sequence[int]], coeffs: Sequence[int], width: int) -> list[int]:
    out = [0] * width
    for a, row in zip(coeffs, rows):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] += a * b
    return out


# ---------------------------------------------------------------------------
# restriction and induction


def restriction_matrix(K: Subgroup, H: Subgroup) -> list[list[int]]:
    """Row i: restriction of the i-th irreducible of K to H."""
    if not H <= K:
        raise TransferError("restriction target is not a subgroup of the source")
    key = ("res", K.mask, H.mask)
    cache = _cache(K.parent)
    if key not in cache:
        tK, tH = K.table(), H.table()
        posK = K.position
        reps = [H.elements[r] for r in tH.classes.reps]
        cls = [tK.classes.class_of[posK[g]] for g in reps]
        cache[key] = [tH.decompose([row[c] for c in cls]) for row in tK.values]
    return cache[key]


def restrict(x: VirtualCharacter, H: Subgroup, K: Optional[Subgroup] = None) -> VirtualCharacter:
    """res from K (default: the whole group) down to H."""
    K = K if K is not None else _whole(H)
    _check_on(x, K, "restriction source")
    m = restriction_matrix(K, H)
    return VirtualCharacter(H.table(), _apply_matrix(m, x.coeffs, H.table().r))


def _induced_values(values_on_H, H: Subgroup, K: Subgroup) -> list[CycInt]:
    """(ind f)(k) = 1/|H| sum_{s in K, s^-1 k s in H} f(s^-1 k s) on K's classes."""
    G = H.parent
    tH, tK = H.table(), K.table()
    posH = H.position
    out = []
    for rep_local in tK.classes.reps:
        k = K.elements[rep_local]
        acc = CycInt.integer(0, tH.exponent)
        for s in K.elements:
            c = G.conj(G.inv(s), k)
            if c in H:
                acc = acc + values_on_H[tH.classes.class_of[posH[c]]]
        out.append(acc.exact_div(H.order))
    return out


def induction_matrix(H: Subgroup, K: Subgroup) -> list[list[int]]:
    """Row i: induction of the i-th irreducible of H up to K."""
    if not H <= K:
        raise TransferError("induction source is not a subgroup of the target")
    key = ("ind", H.mask, K.mask)
    cache = _cache(H.parent)
    if key not in cache:
        tK = K.table()
        cache[key] = [tK.decompose(_induced_values(row, H, K)) for row in H.table().values]
    return cache[key]


def induce(x: VirtualCharacter, H: Subgroup, K: Optional[Subgroup] = None) -> VirtualCharacter:
    """ind from H up to K (default: the whole group)."""
    K = K if K is not None else _whole(H)
    _check_on(x, H, "induction source")
    m = induction_matrix(H, K)
    return VirtualCharacter(K.table(), _apply_matrix(m, x.coeffs, K.table().r))


def conjugation_matrix(H: Subgroup, g: int) -> tuple[Subgroup, list[list[int]]]:
    """Target gHg^-1 and the matrix of x -> x^g with x^g(h) = x(g^-1 h g)."""
    G = H.parent
    target = H.conjugate(g)
    key = ("conj", H.mask, g)
    cache = _cache(G)
    if key not in cache:
        tH, tT = H.table(), target.table()
        posH = H.position
        ginv = G.inv(g)
        src_cls = [tH.classes.class_of[posH[G.conj(ginv, target.elements[r])]] for r in tT.classes.reps]
        cache[key] = [tT.decompose([row[c] for c in src_cls]) for row in tH.values]
    return target, cache[key]


def conjugate_character(x: VirtualCharacter, H: Subgroup, g: int) -> tuple[Subgroup, VirtualCharacter]:
    _check_on(x, H, "conjugation source")
    target, m = conjugation_matrix(H, g)
    return target, VirtualCharacter(target.table(), _apply_matrix(m, x.coeffs, target.table().r))


def mackey_sides(K: Subgroup, H: Subgroup, y: VirtualCharacter) -> tuple[VirtualCharacter, VirtualCharacter]:
    """Both sides of res_K ind_H^G(y) = sum_s ind_{K ∩ sHs^-1}^K res (y^s)."""
    G = H.parent
    lhs = restrict(induce(y, H), K)
    rhs = VirtualCharacter.zero(K.table())
    for s in double_cosets(G, K, H):
        sH, ys = conjugate_character(y, H, s)
        L = K.intersect(sH)
        rhs = rhs + induce(restrict(ys, L, sH), L, K)
    return lhs, rhs


def mackey_check(K: Subgroup, H: Subgroup, y: VirtualCharacter) -> bool:
    lhs, rhs = mackey_sides(K, H, y)
    return lhs == rhs


def permutation_character(H: Subgroup, K: Optional[Subgroup] = None) -> VirtualCharacter:
    """C[K/H] = ind_H^K(1)."""
    return induce(VirtualCharacter.one(H.table()), H, K)


# ---------------------------------------------------------------------------
# tensor induction


def tensor_induce_values(values_on_H: Sequence[CycInt], H: Subgroup, K: Subgroup) -> list[CycInt]:
    """Cycle formula on K's classes: product over cycles of f(t^-1 g^l t)."""
    G = H.parent
    tH, tK = H.table(), K.table()
    posH = H.position
    reps = _transversal_in(K, H)
    coset_of = {}
    for i, t in enumerate(reps):
        for h in H.elements:
            coset_of[G.table[t][h]] = i
    out = []
    for rep_local in tK.classes.reps:
        g = K.elements[rep_local]
        seen = [False] * len(reps)
        val = CycInt.integer(1, tH.exponent)
        for i, t in enumerate(reps):
            if seen[i]:
                continue
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                length += 1
                j = coset_of[G.table[g][reps[j]]]
            y = G.table[G.table[G.inv(t)][G.power(g, length)]][t]
            val = val * values_on_H[tH.classes.class_of[posH[y]]]
        out.append(val)
    return out


def _transversal_in(K: Subgroup, H: Subgroup) -> list[int]:
    """Least element of each left coset tH inside K."""
    G = H.parent
    seen = set()
    reps = []
    for k in K.elements:
        if k in seen:
            continue
        reps.append(k)
        seen.update(G.table[k][h] for h in H.elements)
    return reps


def tensor_induce(rho: VirtualCharacter, H: Subgroup, K: Optional[Subgroup] = None) -> VirtualCharacter:
    """Multiplicative transfer N_H^K of an actual character."""
    K = K if K is not None else _whole(H)
    _check_on(rho, H, "tensor induction source")
    if not rho.is_actual():
        raise TransferError("tensor induction needs an actual character; use norm_virtual")
    vals = tensor_induce_values(rho.values(), H, K)
    return VirtualCharacter(K.table(), K.table().decompose(vals))


# ---------------------------------------------------------------------------
# norms along a normal subgroup of prime index


class InclusionContext:
    """H normal of prime index p in K, with the translation action on subsets of K/H."""

    def __init__(self, K: Subgroup, H: Subgroup):
        if not H <= K:
            raise TransferError("H is not contained in K")
        if K.order % H.order:
            raise TransferError("index is not an integer")
        p = K.order // H.order
        if not is_prime(p):
            raise TransferError(f"index {p} is not prime")
        if p > 7:
            raise TransferError(f"index {p} exceeds the subset enumeration bound 7")
        G = H.parent
        if any(H.conjugate(k) != H for k in K.elements):
            raise TransferError("H is not normal in K")
        self.K, self.H, self.p = K, H, p
        self.G = G
        self.tK, self.tH = K.table(), H.table()
        self.cosets = _transversal_in(K, H)  # cosets[0] is the identity
        coset_of = {}
        for i, t in enumerate(self.cosets):
            for h in H.elements:
                coset_of[G.table[t][h]] = i
        self.coset_of = coset_of
        self.full = (1 << p) - 1
        # a generator of K/H and its action on coset indices
        self.gen = self.cosets[1]
        self.shift = [coset_of[G.table[self.gen][t]] for t in self.cosets]
        self.gen_powers = [G.power(self.gen, j) for j in range(p)]
        # for every subset: (orbit representative, j) with subset = gen^j . rep
        self.orbit = {}
        for mask in range(1 << p):
            images = [mask]
            for _ in range(p - 1):
                images.append(self._translate(images[-1]))
            rep = min(images)
            j = next(j for j in range(p) if images[j] == rep)
            # mask = gen^(-j) rep
            self.orbit[mask] = (rep, (-j) % p)
        self.reps = sorted(set(r for r, _ in self.orbit.values()), key=lambda m: (bin(m).count("1"), m))
        # conjugation action of gen^j on Irr(H)
        self._conj = [None] * p
        for j in range(p):
            _, mat = conjugation_matrix(H, self.gen_powers[j])
            self._conj[j] = mat

    def _translate(self, mask: int) -> int:
        out = 0
        for i in range(self.p):
            if (mask >> i) & 1:
                out |= 1 << self.shift[i]
        return out

    def is_proper(self, mask: int) -> bool:
        return 0 < mask < self.full

    def stabilizer(self, mask: int) -> Subgroup:
        return self.H if self.is_proper(mask) else self.K

    def conj_H(self, x: VirtualCharacter, j: int) -> VirtualCharacter:
        """x^(gen^j) as a character of H."""
        return VirtualCharacter(self.tH, _apply_matrix(self._conj[j % self.p], x.coeffs, self.tH.r))

    def coset_conj(self, x: VirtualCharacter, i: int) -> VirtualCharacter:
        """x^t for the representative t of coset i, i.e. x(t^-1 h t)."""
        t = self.cosets[i]
        _, mat = conjugation_matrix(self.H, t)
        return VirtualCharacter(self.tH, _apply_matrix(mat, x.coeffs, self.tH.r))

    def res(self, x: VirtualCharacter) -> VirtualCharacter:
        return restrict(x, self.H, self.K)

    def ind(self, x: VirtualCharacter) -> VirtualCharacter:
        return induce(x, self.H, self.K)

    def subsets_of_size(self, k: int) -> list[int]:
        return [m for m in range(1 << self.p) if bin(m).count("1") == k]


class VeeElement:
    """One virtual character per orbit of subsets of K/H.

    Proper nonempty subsets carry characters of H, the empty and the full
    subset carry characters of K.
    """

    def __init__(self, ctx: InclusionContext, entries: dict):
        self.ctx = ctx
        self.entries = dict(entries)

    def __getitem__(self, mask: int) -> VirtualCharacter:
        ctx = self.ctx
        rep, j = ctx.orbit[mask]
        x = self.entries[rep]
        if not ctx.is_proper(mask) or j == 0:
            return x
        return ctx.conj_H(x, j)

    def __eq__(self, other):
        return isinstance(other, VeeElement) and self.ctx is other.ctx and self.entries == other.entries

    def top(self) -> VirtualCharacter:
        return self.entries[self.ctx.full]

    @classmethod
    def unit(cls, ctx: InclusionContext) -> "VeeElement":
        entries = {}
        for rep in ctx.reps:
            if rep == 0:
                entries[rep] = VirtualCharacter.one(ctx.tK)
            elif ctx.is_proper(rep):
                entries[rep] = VirtualCharacter.zero(ctx.tH)
            else:
                entries[rep] = VirtualCharacter.zero(ctx.tK)
        return cls(ctx, entries)


def chi_of_rep(rho: VirtualCharacter, ctx: InclusionContext) -> VeeElement:
    """chi(rho)_C = tensor product of the conjugates rho^t over t in C."""
    if not rho.is_actual():
        raise TransferError("chi is defined on actual characters")
    conjs = [ctx.coset_conj(rho, i) for i in range(ctx.p)]
    entries = {}
    for rep in ctx.reps:
        if rep == 0:
            entries[rep] = VirtualCharacter.one(ctx.tK)
        elif rep == ctx.full:
            entries[rep] = tensor_induce(rho, ctx.H, ctx.K)
        else:
            acc = VirtualCharacter.one(ctx.tH)
            for i in range(ctx.p):
                if (rep >> i) & 1:
                    acc = acc * conjs[i]
            entries[rep] = acc
    return VeeElement(ctx, entries)


def _vee_entry(a: VeeElement, b: VeeElement, rep: int) -> VirtualCharacter:
    ctx = a.ctx
    if rep == 0:
        return a[0] * b[0]
    if ctx.is_proper(rep):
        acc = VirtualCharacter.zero(ctx.tH)
        sub = rep
        while True:
            c1, c2 = sub, rep & ~sub
            x = a[c1] if ctx.is_proper(c1) else ctx.res(a[c1])
            y = b[c2] if ctx.is_proper(c2) else ctx.res(b[c2])
            acc = acc + x * y
            if sub == 0:
                break
            sub = (sub - 1) & rep
        return acc
    full = ctx.full
    acc = a[full] * b[0] + a[0] * b[full]
    for c1 in ctx.reps:
        if ctx.is_proper(c1):
            acc = acc + ctx.ind(a[c1] * b[full & ~c1])
    return acc


def vee_product(a: VeeElement, b: VeeElement) -> VeeElement:
    if a.ctx is not b.ctx:
        raise TransferError("vee product of elements over different inclusions")
    return VeeElement(a.ctx, {rep: _vee_entry(a, b, rep) for rep in a.ctx.reps})


def vee_inverse(a: VeeElement) -> VeeElement:
    """The b with a vee b = unit, solved by increasing subset size."""
    ctx = a.ctx
    if a[0] != VirtualCharacter.one(ctx.tK):
        raise TransferError("element is not invertible: entry at the empty set is not 1")
    b = VeeElement.unit(ctx)
    for rep in ctx.reps:
        if rep == 0:
            continue
        # with b_rep = 0 the entry of a vee b collects every other term
        partial = _vee_entry(a, b, rep)
        b.entries[rep] = -partial
    return b


def norm_by_vee(x: VirtualCharacter, ctx: InclusionContext) -> VirtualCharacter:
    """(chi(x+) vee chi(x-)^-1) at the full subset."""
    pos, neg = x.positive_part(), x.negative_part()
    return vee_product(chi_of_rep(pos, ctx), vee_inverse(chi_of_rep(neg, ctx))).top()


def _tensor_over(ctx: InclusionContext, conjs: list, mask: int) -> VirtualCharacter:
    acc = VirtualCharacter.one(ctx.tH)
    for i in range(ctx.p):
        if (mask >> i) & 1:
            acc = acc * conjs[i]
    return acc


def norm_by_subtraction(x: VirtualCharacter, ctx: InclusionContext) -> VirtualCharacter:
    """Closed formula for N(s - t) with s, t actual.

    odd p:  N(s) - N(t) + sum over orbit representatives C of proper subsets
            of (-1)^(p-|C|) ind(s^{⊗C} t^{⊗C'});
    p = 2:  N(s) - N(t) + ind(t t^g) - ind(s t^g).
    """
    s, t = x.positive_part(), x.negative_part()
    p = ctx.p
    ns, nt = tensor_induce(s, ctx.H, ctx.K), tensor_induce(t, ctx.H, ctx.K)
    if p == 2:
        tg = ctx.coset_conj(t, 1)
        return ns - nt + ctx.ind(t * tg) - ctx.ind(s * tg)
    sc = [ctx.coset_conj(s, i) for i in range(p)]
    tc = [ctx.coset_conj(t, i) for i in range(p)]
    acc = ns - nt
    for c in ctx.reps:
        if ctx.is_proper(c):
            term = ctx.ind(_tensor_over(ctx, sc, c) * _tensor_over(ctx, tc, ctx.full & ~c))
            acc = acc + term if (p - bin(c).count("1")) % 2 == 0 else acc - term
    return acc


class NormMismatch(AssertionError):
    pass


def norm_virtual(x: VirtualCharacter, ctx: InclusionContext) -> VirtualCharacter:
    """N_H^K(x) for a virtual character, computed two ways and compared."""
    a = norm_by_subtraction(x, ctx)
    b = norm_by_vee(x, ctx)
    if a != b:
        raise NormMismatch(f"norm routes disagree: {a} vs {b}")
    return a


# ---------------------------------------------------------------------------
# abelian inclusions


def extend_linear(rho: VirtualCharacter, H: Subgroup, K: Optional[Subgroup] = None) -> VirtualCharacter:
    """First linear character of K (canonical order) restricting to rho."""
    K = K if K is not None else _whole(H)
    tK = K.table()
    for i in tK.linear_indices():
        cand = VirtualCharacter.irreducible(tK, i)
        if restrict(cand, H, K) == rho:
            return cand
    raise TransferError("no linear extension exists")


def abelian_norm_of_sum(x: VirtualCharacter, y: VirtualCharacter, ctx: InclusionContext) -> VirtualCharacter:
    """N(x + y) = N(x) + N(y) + sum_{i=1}^{p-1} (C(p,i)/p) ind(x^i y^(p-i)).

    Valid when K is abelian (conjugation acts trivially on R(H)); C(p,i)/p
    counts the translation orbits of i-element subsets.
    """
    if not ctx.K.is_abelian:
        raise TransferError("the abelian addition formula needs an abelian group")
    p = ctx.p
    acc = norm_virtual(x, ctx) + norm_virtual(y, ctx)
    for i in range(1, p):
        acc = acc + ctx.ind(x**i * y ** (p - i)) * (comb(p, i) // p)
    return acc
