import itertools

import pytest

from gradedchar.chartab import character_table
from gradedchar.filtration import gamma_filtration
from gradedchar.group import alternating4, cyclic, dihedral, normalizer, product, psl2, quaternion8, sylow_subgroup
from gradedchar.saturation import (
    NonabelianSylow,
    f_in_gamma_bound,
    gamma_compatibility,
    is_saturated,
    saturated_filtration,
    saturated_filtration_of_subgroup,
    stable_element_subring,
)
from gradedchar.transfer import conjugation_matrix, _apply_matrix
from gradedchar.zlattice import AbelianInvariants


@pytest.mark.parametrize("spec", [cyclic(6), dihedral(4), quaternion8(), alternating4()], ids=str)
def test_saturated_contains_gamma(grp, spec):
    G = grp(spec)
    f = gamma_filtration(character_table(G), 4)
    F = saturated_filtration(G, 4)
    for n in range(5):
        assert F[n].contains_lattice(f[n])
        assert F[n].contains_lattice(F[n + 1])


def test_subgroup_version_agrees_on_whole_group(grp):
    G = grp(alternating4())
    assert saturated_filtration_of_subgroup(G.whole(), 3) == saturated_filtration(G, 3).lattices


def test_a4_verdict_and_piece(grp):
    G = grp(alternating4())
    v = is_saturated(G, 5)
    assert (v.saturated, v.first_failing_degree, v.first_lattice_mismatch) == (False, 2, 3)
    assert saturated_filtration(G, 4).graded_invariants(2) == AbelianInvariants.from_divisors([6])
    # induction from the Klein four group breaks compatibility in degree 3
    assert gamma_compatibility(sylow_subgroup(G, 2), 4) == (False, 3)


def test_cyclic_is_saturated(grp):
    assert is_saturated(grp(cyclic(8)), 5)
    assert f_in_gamma_bound(grp(cyclic(8)), 3, 12) == 3


def brute_invariant_count(gf, n, endos):
    """Count fixed points of the action on the finite group gf^n / gf^(n+1)."""
    q = gf.piece(n)
    moduli = q.active_moduli()
    gens = q.active_generators()
    r = len(gens[0]) if gens else 0
    count = 0
    for coeffs in itertools.product(*[range(m) for m in moduli]):
        v = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(r)]
        if all(q.coordinates(_apply_matrix(m, v, r)) == q.coordinates(v) for m in endos):
            count += 1
    return count


@pytest.mark.parametrize("spec, p", [(alternating4(), 2), (alternating4(), 3), (psl2(5), 5), (psl2(5), 3), (dihedral(5), 2)], ids=str)
def test_stable_elements_against_brute_force(grp, spec, p):
    G = grp(spec)
    rep = stable_element_subring(G, p, 4)
    H = rep.sylow
    gf = gamma_filtration(H.table(), 5)
    endos = [conjugation_matrix(H, g)[1] for g in rep.normalizer.elements]
    for n in range(1, 5):
        assert rep.invariants(n).order == brute_invariant_count(gf, n, endos)
    assert rep.normalizer == normalizer(G, H)


def test_nonabelian_sylow_is_rejected(grp):
    with pytest.raises(NonabelianSylow):
        stable_element_subring(grp(product(quaternion8(), cyclic(3))), 2, 2)
