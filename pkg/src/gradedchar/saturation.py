"""The saturated filtration F^n(G) = sum over H <= G of ind_H^G(Gamma^n(H)).

Conjugate subgroups have the same induced images, so the sum runs over one
subgroup per conjugacy class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .chartab import character_table, subgroup_name
from .filtration import gamma_filtration
from .group import FiniteGroup, Subgroup, normalizer, prime_factors, subgroup_lattice, sylow_subgroup, transversal
from .transfer import conjugation_matrix, induction_matrix, restriction_matrix
from .vchar import VirtualCharacter, vc_mul
from .zlattice import (
    AbelianInvariants,
    IntLattice,
    QuotientPresentation,
    _apply,
    invariant_sublattice_of_quotient,
    lattice_sum,
)


class SaturationError(ValueError):
    pass


def _induced_lattice(L: IntLattice, H: Subgroup, K: Subgroup) -> IntLattice:
    m = induction_matrix(H, K)
    return IntLattice.from_generators((_apply(m, v) for v in L.basis), K.table().r)


def _restricted_lattice(L: IntLattice, K: Subgroup, H: Subgroup) -> IntLattice:
    m = restriction_matrix(K, H)
    return IntLattice.from_generators((_apply(m, v) for v in L.basis), H.table().r)


@dataclass
class SaturatedFiltration:
    group: FiniteGroup
    depth: int
    lattices: list  # F^0 .. F^(depth+1)
    contributors: list  # per degree: names of subgroups adding beyond Gamma^n(G)
    _pieces: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> IntLattice:
        return self.lattices[max(n, 0)]

    def piece(self, n: int) -> QuotientPresentation:
        if n not in self._pieces:
            self._pieces[n] = QuotientPresentation(self[n], self[n + 1])
        return self._pieces[n]

    def graded_invariants(self, n: int) -> AbelianInvariants:
        return self.piece(n).invariants

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "depth": self.depth,
            "degrees": [
                {
                    "degree": n,
                    "invariants": self.graded_invariants(n).to_json(),
                    "summary": str(self.graded_invariants(n)),
                    "contributing_subgroups": list(self.contributors[n]),
                }
                for n in range(self.depth + 1)
            ],
        }


def saturated_filtration(G: FiniteGroup, depth: int) -> SaturatedFiltration:
    cache = G.__dict__.setdefault("_saturated", {})
    best = min((d for d in cache if d >= depth), default=None)
    if best is not None:
        f = cache[best]
        if best == depth:
            return f
        return SaturatedFiltration(G, depth, f.lattices[: depth + 2], f.contributors[: depth + 1])
    K = G.whole()
    tG = character_table(G)
    own = gamma_filtration(tG, depth)
    lattices = []
    contributors = []
    images = {}
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        try:
            tH = H.table()
        except LookupError as exc:
            raise SaturationError(f"subgroup table unavailable for subgroup of order {H.order}: {exc}") from exc
        gf = gamma_filtration(tH, depth)
        images[H] = [_induced_lattice(gf[n], H, K) for n in range(depth + 2)]
    for n in range(depth + 2):
        total = lattice_sum(*[imgs[n] for imgs in images.values()])
        lattices.append(total)
        if n <= depth:
            names = sorted(
                {subgroup_name(H) for H, imgs in images.items() if not own[n].contains_lattice(imgs[n])}
            )
            contributors.append(names)
    f = SaturatedFiltration(G, depth, lattices, contributors)
    cache[depth] = f
    return f


@dataclass(frozen=True)
class SaturationVerdict:
    """Outcome of comparing Gamma^n and F^n up to a depth.

    ``first_failing_degree`` is the least n where the graded map
    Gamma^n/Gamma^(n+1) -> F^n/F^(n+1) is not an isomorphism; that is one
    below ``first_lattice_mismatch``, the least n with Gamma^n != F^n.
    """

    saturated: bool
    first_failing_degree: Optional[int]
    first_lattice_mismatch: Optional[int]

    def __iter__(self):
        yield self.saturated
        yield self.first_failing_degree

    def __bool__(self):
        return self.saturated


def is_saturated(G: FiniteGroup, depth: int) -> SaturationVerdict:
    """Compare the gamma and saturated filtrations in degrees 0..depth."""
    gamma = gamma_filtration(character_table(G), depth)
    sat = saturated_filtration(G, depth)
    for n in range(depth + 2):
        if gamma[n] != sat[n]:
            return SaturationVerdict(False, max(n - 1, 0), n)
    return SaturationVerdict(True, None, None)


def gamma_compatibility(H: Subgroup, depth: int, K: Optional[Subgroup] = None) -> tuple[bool, Optional[int]]:
    """Whether ind_H^K(Gamma^n(H)) lies in Gamma^n(K) for all n <= depth."""
    K = K if K is not None else H.parent.whole()
    gH = gamma_filtration(H.table(), depth)
    gK = gamma_filtration(K.table(), depth)
    for n in range(depth + 1):
        if not gK[n].contains_lattice(_induced_lattice(gH[n], H, K)):
            return False, n
    return True, None


def restriction_surjectivity(G: FiniteGroup) -> tuple[bool, list]:
    """Whether res: R(G) -> R(H) is onto for every subgroup; lists failures."""
    K = G.whole()
    failures = []
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        r = H.table().r
        img = _restricted_lattice(IntLattice.full(K.table().r), K, H)
        if img != IntLattice.full(r):
            failures.append(H)
    return not failures, failures


def f_in_gamma_bound(G: FiniteGroup, n: int, cap: int) -> Optional[int]:
    """Least M <= cap with F^M(G) contained in Gamma^n(G), or None."""
    gamma = gamma_filtration(character_table(G), max(n, 1))
    sat = saturated_filtration(G, cap)
    for M in range(0, cap + 1):
        if gamma[n].contains_lattice(sat[M]):
            return M
    return None


def corestriction_surjectivity_check(G: FiniteGroup, p: int, depth: int) -> tuple[bool, list]:
    """Per degree: index of ind(F^n(Syl_p)) + F^(n+1)(G) in F^n(G) is prime to p."""
    P = sylow_subgroup(G, p)
    K = G.whole()
    sG = saturated_filtration(G, depth)
    sP = saturated_filtration_of_subgroup(P, depth)
    ok = True
    indices = []
    for n in range(depth + 1):
        image = lattice_sum(_induced_lattice(sP[n], P, K), sG[n + 1])
        inv = QuotientPresentation(sG[n], image).invariants
        idx = inv.order
        indices.append(idx)
        if idx is None or idx % p == 0:
            ok = False
    return ok, indices


def saturated_filtration_of_subgroup(H: Subgroup, depth: int) -> list:
    """F^n(H) computed inside the ambient group: sum over subgroups L <= H of ind_L^H Gamma^n(L)."""
    tH = H.table()
    lat = []
    subs = [L for L in subgroup_lattice(H.parent) if L <= H]
    gfs = {L: gamma_filtration(L.table(), depth) for L in subs}
    for n in range(depth + 2):
        lat.append(lattice_sum(*[_induced_lattice(gfs[L][n], L, H) for L in subs]))
    return lat


# ---------------------------------------------------------------------------
# stable elements


@dataclass
class StableDegree:
    degree: int
    invariants: AbelianInvariants
    generators: list  # ambient vectors in R(H)
    witnesses: list  # readable names where available


@dataclass
class StableElementReport:
    prime: int
    sylow: Subgroup
    normalizer: Subgroup
    action: list  # permutations of Irr(H), one per coset of H in N
    degrees: list
    products: dict  # (i, j) -> coordinates of generator_i * generator_j

    def invariants(self, n: int) -> AbelianInvariants:
        return self.degrees[n].invariants

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "sylow": {"order": self.sylow.order, "type": subgroup_name(self.sylow)},
            "normalizer": {"order": self.normalizer.order, "type": subgroup_name(self.normalizer)},
            "action": [list(p) for p in self.action],
            "degrees": [
                {
                    "degree": d.degree,
                    "invariants": d.invariants.to_json(),
                    "summary": str(d.invariants),
                    "witnesses": list(d.witnesses),
                }
                for d in self.degrees
            ],
        }


class NonabelianSylow(ValueError):
    pass


def _permutation_of(mat) -> Optional[tuple]:
    perm = []
    for row in mat:
        nz = [(j, a) for j, a in enumerate(row) if a]
        if len(nz) != 1 or nz[0][1] != 1:
            return None
        perm.append(nz[0][0])
    return tuple(perm)


def stable_element_subring(G: FiniteGroup, p: int, depth: int) -> StableElementReport:
    """N_G(H)-invariants of the graded ring of an abelian Sylow p-subgroup H."""
    H = sylow_subgroup(G, p)
    if not H.is_abelian:
        raise NonabelianSylow(f"Sylow {p}-subgroup of {G.name} is not abelian")
    N = normalizer(G, H)
    tH = H.table()
    reps = [g for g in _coset_reps(N, H)]
    endos, action = [], []
    for g in reps:
        _, mat = conjugation_matrix(H, g)
        endos.append(mat)
        action.append(_permutation_of(mat))
    gf = gamma_filtration(tH, depth + 1)
    degrees = []
    for n in range(depth + 1):
        inv, gens, _ = invariant_sublattice_of_quotient(gf[n], gf[n + 1], endos)
        degrees.append(StableDegree(n, inv, gens, _name_witnesses(gf, n, gens)))
    mul = lambda u, v: vc_mul(VirtualCharacter(tH, u), VirtualCharacter(tH, v)).coeffs
    products = {}
    for i in range(1, depth + 1):
        for j in range(i, depth + 1 - i):
            for a, u in enumerate(degrees[i].generators):
                for b, v in enumerate(degrees[j].generators):
                    w = mul(u, v)
                    products[(i, a, j, b)] = gf.piece(i + j).coordinates(w)
    return StableElementReport(p, H, N, action, degrees, products)


def _coset_reps(N: Subgroup, H: Subgroup) -> list[int]:
    G = N.parent
    seen = set()
    reps = []
    for g in N.elements:
        if g in seen:
            continue
        reps.append(g)
        seen.update(G.table[g][h] for h in H.elements)
    return reps


def _name_witnesses(gf, n: int, gens) -> list[str]:
    """Readable names for invariant generators.

    Tries powers of a single atom first, then sums of up to three distinct
    weight-n monomials; falls back to "unnamed".
    """
    import itertools

    from .filtration import chern_monomials, gamma_atoms

    if n == 0:
        return ["1"]
    q = gf.piece(n)
    mul = lambda u, v: vc_mul(VirtualCharacter(gf.table, u), VirtualCharacter(gf.table, v)).coeffs
    candidates = []
    for a in gamma_atoms(gf.table).atoms:
        if n % a.weight == 0:
            v = a.vector
            for _ in range(n // a.weight - 1):
                v = mul(v, a.vector)
            k = n // a.weight
            candidates.append((a.name if k == 1 else f"{a.name}^{k}", v))
    for count, (name, vec) in enumerate(chern_monomials(gf.table, n)):
        if count >= 24:
            break
        candidates.append((name, vec))
    coords = [(name, q.coordinates(v)) for name, v in candidates]
    moduli = q.active_moduli()

    def add(*cs):
        return tuple((sum(x) % m) if m else sum(x) for x, m in zip(zip(*cs), moduli))

    names = []
    for g in gens:
        target = q.coordinates(g)
        found = None
        for size in (1, 2, 3):
            for combo in itertools.combinations(coords, size):
                if add(*[c for _, c in combo]) == target:
                    found = " + ".join(name for name, _ in combo)
                    break
            if found:
                break
        names.append(found or "unnamed")
    return names


def stable_invariants(G: FiniteGroup, depth: int, primes=None) -> list[AbelianInvariants]:
    """Per degree, the direct sum over primes p | |G| of the stable-element invariants."""
    primes = primes if primes is not None else prime_factors(G.order)
    out = []
    reports = [stable_element_subring(G, p, depth) for p in primes]
    for n in range(depth + 1):
        if n == 0:
            out.append(AbelianInvariants(1, ()))
            continue
        total = AbelianInvariants(0, ())
        for rep in reports:
            inv = rep.invariants(n)
            total = total + inv.p_part(rep.prime)
        out.append(total)
    return out
