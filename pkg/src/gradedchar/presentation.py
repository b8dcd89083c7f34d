"""Graded rings given by generators and homogeneous relations.

``GradedPresentation({"x": 1, "y": 2}, ["3*x", "12*y", "4*y + x^2"])`` is
Z[x, y] / (3x, 12y, 4y + x^2) with |x| = 1 and |y| = 2.  Its degree-n part
is the free group on monomials of degree n modulo all multiples m * r with
deg m + deg r = n, and its invariants come from a Smith normal form.

A presentation can also be matched against a filtration: assign each
variable an element of the ring, then check that every relation vanishes in
the graded ring and that the monomials generate each graded piece.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import sympy

from .zlattice import AbelianInvariants, IntLattice, QuotientPresentation, smith_normal_form


@dataclass
class GradedPresentation:
    degrees: dict  # variable name -> positive degree, in declaration order
    relations: list = field(default_factory=list)

    def __post_init__(self):
        if any(d < 1 for d in self.degrees.values()):
            raise ValueError("variables need positive degrees")

    @cached_property
    def names(self) -> list[str]:
        return list(self.degrees)

    @cached_property
    def _symbols(self):
        return [sympy.Symbol(n) for n in self.names]

    @cached_property
    def relation_terms(self) -> list[tuple[int, dict]]:
        """(degree, {exponent tuple: coefficient}) per relation."""
        local = dict(zip(self.names, self._symbols))
        out = []
        for text in self.relations:
            expr = sympy.sympify(text.replace("^", "**"), locals=local)
            poly = sympy.Poly(expr, *self._symbols, domain="ZZ")
            terms = {tuple(m): int(c) for m, c in poly.terms() if c}
            degs = {self.weight(m) for m in terms}
            if len(degs) != 1:
                raise ValueError(f"relation {text!r} is not homogeneous")
            out.append((degs.pop(), terms))
        return out

    def weight(self, exps: Sequence[int]) -> int:
        return sum(e * self.degrees[v] for v, e in zip(self.names, exps))

    def monomials(self, n: int) -> list[tuple]:
        """Exponent tuples of weight n, in lexicographic order."""
        ws = [self.degrees[v] for v in self.names]

        def rec(i, left):
            if i == len(ws):
                if left == 0:
                    yield ()
                return
            for e in range(left // ws[i] + 1):
                for rest in rec(i + 1, left - e * ws[i]):
                    yield (e,) + rest

        return sorted(rec(0, n))

    def invariants(self, n: int) -> AbelianInvariants:
        mons = self.monomials(n)
        index = {m: i for i, m in enumerate(mons)}
        rows = []
        for d, terms in self.relation_terms:
            if d > n:
                continue
            for m in self.monomials(n - d):
                row = [0] * len(mons)
                for e, c in terms.items():
                    row[index[tuple(a + b for a, b in zip(m, e))]] += c
                rows.append(row)
        if not mons:
            return AbelianInvariants.from_divisors([])
        diag, _, _ = smith_normal_form(rows, len(mons)) if rows else ([], None, None)
        divisors = [d for d in diag if d != 1]
        divisors += [0] * (len(mons) - len(diag))
        return AbelianInvariants.from_divisors(divisors)

    def expansion(self, depth: int) -> list[AbelianInvariants]:
        return [self.invariants(n) for n in range(depth + 1)]


@dataclass
class MatchReport:
    relations_ok: bool
    generation_ok: bool
    invariants_ok: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.relations_ok and self.generation_ok and self.invariants_ok


def realize(
    pres: GradedPresentation,
    images: dict,
    mul: Callable[[Sequence[int], Sequence[int]], Sequence[int]],
    one: Sequence[int],
    exps: Sequence[int],
) -> tuple:
    acc = tuple(one)
    for v, e in zip(pres.names, exps):
        for _ in range(e):
            acc = tuple(mul(acc, images[v]))
    return acc


def match_presentation(
    pres: GradedPresentation,
    lattices: Sequence[IntLattice],
    images: dict,
    mul: Callable,
    one: Sequence[int],
    depth: int,
) -> MatchReport:
    """Compare a filtration L^0 ⊇ L^1 ⊇ ... with a presentation up to ``depth``.

    images[v] must lie in L^{deg v}.  Relations of degree d must land in
    L^{d+1}; monomials of degree n must generate L^n / L^{n+1}; invariants
    must agree.  The three together give an isomorphism in each degree.
    """
    failures = []
    rel_ok = True
    for text, (d, terms) in zip(pres.relations, pres.relation_terms):
        if d > depth:
            continue
        vec = [0] * len(one)
        for e, c in terms.items():
            for i, a in enumerate(realize(pres, images, mul, one, e)):
                vec[i] += c * a
        if not lattices[d + 1].contains(vec):
            rel_ok = False
            failures.append(f"relation {text} does not vanish in degree {d}")
    gen_ok = True
    inv_ok = True
    for n in range(1, depth + 1):
        q = QuotientPresentation(lattices[n], lattices[n + 1])
        expected = pres.invariants(n)
        if q.invariants != expected:
            inv_ok = False
            failures.append(f"degree {n}: found {q.invariants}, presentation gives {expected}")
        k = len(q.active_moduli())
        if k == 0:
            continue
        span_gens = [tuple(m if i == j else 0 for j in range(k)) for i, m in enumerate(q.active_moduli()) if m]
        for e in pres.monomials(n):
            span_gens.append(q.coordinates(realize(pres, images, mul, one, e)))
        if IntLattice.from_generators(span_gens, k) != IntLattice.full(k):
            gen_ok = False
            failures.append(f"degree {n}: monomials do not generate")
    return MatchReport(rel_ok, gen_ok, inv_ok, failures)
