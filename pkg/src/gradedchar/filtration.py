"""The gamma filtration of R(G) and its graded pieces.

Gamma^n is the ideal spanned by products of gamma-operations on the
augmentation ideal with total weight at least n.  Every such product can be
rewritten through the atoms gamma^m(chi_i - d_i) (1 <= m <= d_i, chi_i
nontrivial), so

    Gamma^n = sum over atoms a of a * Gamma^{max(0, n - w(a))}

which is solved degree by degree: the right side only involves strictly
lower degrees.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chartab import CharacterTable
from .vchar import VirtualCharacter, gamma_op, vc_mul
from .zlattice import AbelianInvariants, IntLattice, QuotientPresentation

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class Atom:
    index: int  # irreducible chi_index
    weight: int
    vector: tuple

    @property
    def name(self) -> str:
        return f"c{self.weight}(r{self.index})"


@dataclass
class AtomSet:
    table: CharacterTable
    atoms: list

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)


def gamma_atoms(table: CharacterTable) -> AtomSet:
    """Nonzero gamma^m(chi_i - d_i) for nontrivial chi_i and 1 <= m <= d_i.

    gamma^m vanishes above m = d_i because gamma_t(rho - d) is a polynomial of
    degree at most d; that is asserted here rather than assumed.
    """
    cached = table.__dict__.get("_gamma_atoms")
    if cached is not None:
        return cached
    atoms = []
    for i in range(1, table.r):
        d = table.degrees[i]
        x = VirtualCharacter.irreducible(table, i) - d
        for m in range(1, d + 2):
            g = gamma_op(m, x)
            if m > d:
                if not g.is_zero():
                    raise AssertionError(f"gamma^{m} of r{i} - {d} is nonzero")
                continue
            if not g.is_zero():
                atoms.append(Atom(i, m, g.coeffs))
    out = AtomSet(table, atoms)
    table.__dict__["_gamma_atoms"] = out
    return out


def ring_mul(table: CharacterTable):
    def mul(u: Sequence[int], v: Sequence[int]) -> tuple:
        return vc_mul(VirtualCharacter(table, u), VirtualCharacter(table, v)).coeffs

    return mul


def augmentation_ideal(table: CharacterTable) -> IntLattice:
    r = table.r
    vecs = []
    for i in range(1, r):
        v = [0] * r
        v[i] = 1
        v[0] = -table.degrees[i]
        vecs.append(v)
    return IntLattice.from_generators(vecs, r)


def _ideal(table: CharacterTable, gens: Sequence[Sequence[int]]) -> list[tuple]:
    """Products of gens with every irreducible (spans the ideal)."""
    mul = ring_mul(table)
    r = table.r
    basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return [mul(g, b) for g in gens for b in basis]


class GammaFiltration:
    """Gamma^0 ⊇ Gamma^1 ⊇ ... ⊇ Gamma^(depth+1) as HNF lattices.

    The extra lattice at depth+1 makes the graded piece of degree ``depth``
    available.
    """

    def __init__(self, table: CharacterTable, lattices: list[IntLattice]):
        self.table = table
        self.lattices = lattices
        self.depth = len(lattices) - 2
        self._pieces: dict[int, QuotientPresentation] = {}

    def __getitem__(self, n: int) -> IntLattice:
        if n < 0:
            n = 0
        if n >= len(self.lattices):
            raise IndexError(f"filtration computed only to degree {len(self.lattices) - 1}")
        return self.lattices[n]

    def piece(self, n: int) -> QuotientPresentation:
        """Gamma^n / Gamma^(n+1)."""
        if n not in self._pieces:
            self._pieces[n] = QuotientPresentation(self[n], self[n + 1])
        return self._pieces[n]

    def graded_invariants(self, n: int) -> AbelianInvariants:
        return self.piece(n).invariants

    def contains(self, x, n: int) -> bool:
        v = x.coeffs if isinstance(x, VirtualCharacter) else x
        return self[n].contains(v)


def gamma_filtration(table: CharacterTable, depth: int = DEFAULT_DEPTH) -> GammaFiltration:
    """Gamma filtration computed degree by degree (cached per table and depth)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    cache = table.__dict__.setdefault("_gamma_filtration", {})
    best = max((d for d in cache if d >= depth), default=None)
    if best is not None:
        f = cache[best]
        return f if best == depth else GammaFiltration(table, f.lattices[: depth + 2])
    r = table.r
    atoms = gamma_atoms(table).atoms
    mul = ring_mul(table)
    lattices = [IntLattice.full(r), augmentation_ideal(table)]
    # reuse shallower results if present
    prev = max(cache, default=None)
    if prev is not None:
        lattices = list(cache[prev].lattices)
    for n in range(len(lattices), depth + 2):
        gens = []
        for a in atoms:
            if a.weight >= n:
                gens.extend(_ideal(table, [a.vector]))
            else:
                lower = lattices[n - a.weight]
                gens.extend(mul(a.vector, b) for b in lower.basis)
        lattices.append(IntLattice.from_generators(gens, r))
    f = GammaFiltration(table, lattices)
    cache[depth] = f
    return f


def gamma_filtration_fixpoint(table: CharacterTable, depth: int, seed: Optional[int] = None) -> GammaFiltration:
    """The same filtration by simultaneous fixpoint iteration.

    Starts from the ideals of atoms of weight >= n and repeatedly adds
    a * Gamma^(n - w(a)), visiting (degree, atom) pairs in a shuffled order.
    Used to check that the result does not depend on the schedule.
    """
    rng = random.Random(seed)
    r = table.r
    atoms = gamma_atoms(table).atoms
    mul = ring_mul(table)
    top = depth + 1
    lat = [IntLattice.full(r)]
    for n in range(1, top + 1):
        gens = []
        for a in atoms:
            if a.weight >= n:
                gens.extend(_ideal(table, [a.vector]))
        lat.append(IntLattice.from_generators(gens, r))
    tasks = [(n, k) for n in range(1, top + 1) for k, a in enumerate(atoms) if a.weight < n]
    changed = True
    while changed:
        changed = False
        rng.shuffle(tasks)
        for n, k in tasks:
            a = atoms[k]
            src = lat[n - a.weight]
            new = IntLattice.from_generators(list(lat[n].basis) + [mul(a.vector, b) for b in src.basis], r)
            if new != lat[n]:
                lat[n] = new
                changed = True
    return GammaFiltration(table, lat)


def ideal_power_filtration(table: CharacterTable, depth: int) -> list[IntLattice]:
    """I^0, I^1, ..., I^(depth+1); equals the gamma filtration for abelian groups."""
    r = table.r
    mul = ring_mul(table)
    I = augmentation_ideal(table)
    out = [IntLattice.full(r), I]
    for _ in range(2, depth + 2):
        out.append(IntLattice.from_generators((mul(a, b) for a in out[-1].basis for b in I.basis), r))
    return out


# ---------------------------------------------------------------------------
# graded elements and reports


@dataclass(frozen=True)
class GradedElement:
    degree: int
    coordinates: tuple
    moduli: tuple
    order: Optional[int]  # None when of infinite order

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coordinates)


class NotInFiltration(ValueError):
    pass


def graded_image(filtration: GammaFiltration, x, n: int) -> GradedElement:
    """Class of x in Gamma^n / Gamma^(n+1)."""
    v = x.coeffs if isinstance(x, VirtualCharacter) else tuple(x)
    if not filtration[n].contains(v):
        raise NotInFiltration(f"element is not in filtration degree {n}")
    q = filtration.piece(n)
    coords = q.coordinates(v)
    return GradedElement(n, coords, tuple(q.active_moduli()), q.order(v))


def relation_check(filtration: GammaFiltration, element, n: int) -> bool:
    """True iff element lies in Gamma^(n+1), i.e. vanishes in degree n."""
    v = element.coeffs if isinstance(element, VirtualCharacter) else tuple(element)
    return filtration[n + 1].contains(v)


def chern_monomials(table: CharacterTable, degree: int):
    """Atom monomials of total weight ``degree`` as (name, vector), lazily."""
    atoms = gamma_atoms(table).atoms
    mul = ring_mul(table)

    def label(names: list) -> str:
        parts = []
        for name in names:
            if parts and parts[-1][0] == name:
                parts[-1][1] += 1
            else:
                parts.append([name, 1])
        return "*".join(n if k == 1 else f"{n}^{k}" for n, k in parts)

    def rec(start: int, remaining: int, names: list, vec):
        if remaining == 0:
            yield label(names), vec
            return
        for k in range(start, len(atoms)):
            a = atoms[k]
            if a.weight <= remaining:
                yield from rec(k, remaining - a.weight, names + [a.name], mul(vec, a.vector) if vec is not None else a.vector)

    yield from rec(0, degree, [], None)


@dataclass
class DegreeReport:
    degree: int
    invariants: AbelianInvariants
    witnesses: list = field(default_factory=list)  # (monomial name, order)


@dataclass
class GradedRingReport:
    group: str
    depth: int
    degrees: list

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "depth": self.depth,
            "degrees": [
                {
                    "degree": d.degree,
                    "invariants": d.invariants.to_json(),
                    "summary": str(d.invariants),
                    "witnesses": [{"monomial": m, "order": o} for m, o in d.witnesses],
                }
                for d in self.degrees
            ],
        }

    def to_text(self) -> str:
        lines = [f"graded character ring of {self.group} (degrees 0..{self.depth})"]
        for d in self.degrees:
            w = ", ".join(f"{m} (order {o})" for m, o in d.witnesses)
            lines.append(f"  degree {d.degree}: {d.invariants}" + (f"; generated by {w}" if w else ""))
        return "\n".join(lines)


def generating_witnesses(filtration: GammaFiltration, n: int, limit: int = 5000) -> list[tuple[str, int]]:
    """Chern monomials of weight n whose images generate the degree-n piece.

    Greedy: a monomial is kept when it enlarges the subgroup generated so far.
    """
    if n == 0:
        return [("1", 0)]
    q = filtration.piece(n)
    moduli = q.active_moduli()
    k = len(moduli)
    if k == 0:
        return []
    relations = [tuple(m if i == j else 0 for j in range(k)) for i, m in enumerate(moduli) if m]
    target = IntLattice.full(k)
    span = IntLattice.from_generators(relations, k)
    chosen = []
    for count, (name, vec) in enumerate(chern_monomials(filtration.table, n)):
        if count >= limit or span == target:
            break
        y = q.coordinates(vec)
        if span.contains(y):
            continue
        span = IntLattice.from_generators(list(span.basis) + [y], k)
        chosen.append((name, q.order(vec)))
    return chosen


def graded_ring_report(table: CharacterTable, depth: int, witnesses: bool = True) -> GradedRingReport:
    f = gamma_filtration(table, depth)
    degrees = []
    for n in range(depth + 1):
        inv = f.graded_invariants(n)
        w = generating_witnesses(f, n) if witnesses and n > 0 else []
        degrees.append(DegreeReport(n, inv, w))
    return GradedRingReport(table.group.name, depth, degrees)
