import itertools

import pytest

from gradedchar.filtration import (
    NotInFiltration,
    chern_monomials,
    gamma_filtration,
    gamma_filtration_fixpoint,
    graded_image,
    graded_ring_report,
    ideal_power_filtration,
    relation_check,
)
from gradedchar.group import alternating4, cyclic, dihedral, product, quaternion8
from gradedchar.vchar import VirtualCharacter, chern_rep, gamma_op
from gradedchar.zlattice import AbelianInvariants, IntLattice


def brute_gamma(t, n):
    """Gamma^n straight from the definition, with no shared code beyond gamma_op.

    Generated by R-multiples of products of gamma^i(rho_j - d_j); a product of
    weight >= n has a prefix of weight in [n, n + max degree).
    """
    atoms = []
    for j in range(1, t.r):
        rho = VirtualCharacter.irreducible(t, j)
        for i in range(1, t.degrees[j] + 1):
            atoms.append((i, gamma_op(i, rho - t.degrees[j])))
    top = n + max(t.degrees)
    mons = {0: [VirtualCharacter.one(t)]}
    for w in range(1, top):
        mons[w] = [m * a for i, a in atoms if i <= w for m in mons[w - i]]
    gens = []
    for w in range(n, top):
        for m in mons[w]:
            for k in range(t.r):
                gens.append((m * VirtualCharacter.irreducible(t, k)).coeffs)
    if n == 0:
        return IntLattice.full(t.r)
    return IntLattice.from_generators(gens, t.r)


@pytest.mark.parametrize("spec", [cyclic(4), dihedral(3), quaternion8(), alternating4(), dihedral(5)], ids=str)
def test_matches_definition(table_of, spec):
    t = table_of(spec)
    f = gamma_filtration(t, 4)
    for n in range(6):
        assert f[n] == brute_gamma(t, n), n


@pytest.mark.parametrize("spec", [quaternion8(), alternating4(), dihedral(4)], ids=str)
def test_schedule_independence(table_of, spec):
    t = table_of(spec)
    f = gamma_filtration(t, 5)
    for seed in (0, 1, 2):
        assert gamma_filtration_fixpoint(t, 5, seed).lattices == f.lattices


@pytest.mark.parametrize("spec", [cyclic(6), product(cyclic(2), cyclic(2)), product(cyclic(2), cyclic(4))], ids=str)
def test_ideal_powers_for_abelian_groups(table_of, spec):
    t = table_of(spec)
    assert ideal_power_filtration(t, 5) == gamma_filtration(t, 5).lattices


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 8, 12])
def test_cyclic_pieces(table_of, N):
    f = gamma_filtration(table_of(cyclic(N)), 6)
    assert f.graded_invariants(0) == AbelianInvariants.from_divisors([], free_rank=1)
    for n in range(1, 7):
        assert f.graded_invariants(n) == AbelianInvariants.from_divisors([N])


def test_filtration_is_decreasing_and_multiplicative(table_of):
    t = table_of(alternating4())
    f = gamma_filtration(t, 5)
    for n in range(6):
        assert f[n].contains_lattice(f[n + 1])
    for a, b in itertools.product(range(1, 4), repeat=2):
        if a + b <= 6:
            for u in f[a].basis:
                for v in f[b].basis:
                    assert f.contains((VirtualCharacter(t, u) * VirtualCharacter(t, v)).coeffs, a + b)


def test_graded_images(table_of):
    t = table_of(alternating4())
    f = gamma_filtration(t, 4)
    theta = VirtualCharacter.irreducible(t, 3)
    y = chern_rep(2, theta)
    assert graded_image(f, y, 2).order == 12
    assert relation_check(f, 3 * chern_rep(1, VirtualCharacter.irreducible(t, 1)), 1)
    with pytest.raises(NotInFiltration):
        graded_image(f, theta, 1)


def test_monomial_labels(table_of):
    names = [n for n, _ in chern_monomials(table_of(alternating4()), 2)]
    assert "c1(r1)^2" in names and "c2(r3)" in names


def test_report_witnesses_generate(table_of):
    rep = graded_ring_report(table_of(quaternion8()), 3)
    assert [str(d.invariants) for d in rep.degrees] == ["Z", "Z/2 + Z/2", "Z/8", "Z/2 + Z/2"]
    assert 8 in [o for _, o in rep.degrees[2].witnesses]
