import random

import pytest

from gradedchar.cli import find_subgroup
from gradedchar.group import alternating4, cyclic, dihedral, product, quaternion8, subgroup_lattice, sylow_subgroup
from gradedchar.transfer import (
    InclusionContext,
    TransferError,
    abelian_norm_of_sum,
    induce,
    mackey_check,
    norm_by_subtraction,
    norm_by_vee,
    norm_virtual,
    permutation_character,
    restrict,
    tensor_induce,
)
from gradedchar.vchar import VirtualCharacter


def rand_vc(t, rng, size=2):
    return VirtualCharacter(t, [rng.randint(-size, size) for _ in range(t.r)])


def value(x, S, g):
    """x(g) for g in S, numerically."""
    t = x.table
    c = t.classes.class_of[S.position[g]]
    return sum(a * complex(t.values[i][c]) for i, a in enumerate(x.coeffs))


def inner(x, y):
    return sum(a * b for a, b in zip(x.coeffs, y.coeffs))


@pytest.mark.parametrize("spec", [dihedral(4), alternating4(), quaternion8()], ids=str)
def test_induction_matches_formula(grp, spec):
    G = grp(spec)
    K = G.whole()
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        tH = H.table()
        for i in range(tH.r):
            x = VirtualCharacter.irreducible(tH, i)
            y = induce(x, H)
            for g in range(G.order):
                want = sum(value(x, H, G.conj(G.inv(s), g)) for s in range(G.order) if G.conj(G.inv(s), g) in H) / H.order
                assert abs(value(y, K, g) - want) < 1e-8


@pytest.mark.parametrize("spec", [dihedral(5), alternating4(), product(cyclic(2), dihedral(3))], ids=str)
def test_frobenius_reciprocity_and_projection(grp, spec):
    G = grp(spec)
    tG = G.whole().table()
    rng = random.Random(5)
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        x, y = rand_vc(H.table(), rng), rand_vc(tG, rng)
        assert inner(induce(x, H), y) == inner(x, restrict(y, H))
        assert induce(x * restrict(y, H), H) == induce(x, H) * y


@pytest.mark.parametrize("spec", [dihedral(4), alternating4(), quaternion8()], ids=str)
def test_mackey_formula(grp, spec):
    G = grp(spec)
    rng = random.Random(2)
    subs = subgroup_lattice(G, up_to_conjugacy=True)
    for H in subs:
        for K in subs:
            assert mackey_check(K, H, rand_vc(H.table(), rng))


def test_permutation_character_counts_fixed_cosets(grp):
    G = grp(alternating4())
    H = sylow_subgroup(G, 3)
    perm = permutation_character(H)
    cosets = [frozenset(G.mul(g, h) for h in H.elements) for g in range(G.order)]
    for g in range(G.order):
        fixed = len({c for c in cosets if frozenset(G.mul(g, x) for x in c) == c})
        assert abs(value(perm, G.whole(), g) - fixed) < 1e-8


@pytest.mark.parametrize("spec, sub", [(cyclic(4), "C2"), (dihedral(4), "C4"), (alternating4(), "C2xC2"), (cyclic(9), "C3")], ids=str)
def test_tensor_induction_of_linear_characters_is_transfer(grp, spec, sub):
    # for a linear character the norm is g -> prod chi(h_i), with g t_i = t_s(i) h_i
    G = grp(spec)
    H = find_subgroup(G, sub)
    K = G.whole()
    tH = H.table()
    reps = []
    for k in range(G.order):
        if not any(G.mul(G.inv(t), k) in H for t in reps):
            reps.append(k)
    for i in tH.linear_indices():
        chi = VirtualCharacter.irreducible(tH, i)
        N = tensor_induce(chi, H)
        assert N.augmentation() == 1
        for g in range(G.order):
            prod = 1
            for t in reps:
                gt = G.mul(g, t)
                s = next(u for u in reps if G.mul(G.inv(u), gt) in H)
                prod *= value(chi, H, G.mul(G.inv(s), gt))
            assert abs(value(N, K, g) - prod) < 1e-8


def test_tensor_induction_degree(grp):
    G = grp(alternating4())
    V = sylow_subgroup(G, 2)
    tV = V.table()
    rho = VirtualCharacter.irreducible(tV, 1) + 1
    assert tensor_induce(rho, V).augmentation() == 8
    with pytest.raises(TransferError):
        tensor_induce(rho - 3, V)


INCLUSIONS = [(cyclic(4), "C2"), (product(cyclic(2), cyclic(2)), "C2"), (cyclic(9), "C3"), (alternating4(), "C2xC2"), (dihedral(3), "C3")]


@pytest.mark.parametrize("spec, sub", INCLUSIONS, ids=str)
def test_norm_routes_agree_and_extend_tensor_induction(grp, spec, sub):
    G = grp(spec)
    ctx = InclusionContext(G.whole(), find_subgroup(G, sub))
    rng = random.Random(9)
    for _ in range(30):
        x = rand_vc(ctx.tH, rng)
        assert norm_by_subtraction(x, ctx) == norm_by_vee(x, ctx)
    for _ in range(5):
        x = rand_vc(ctx.tH, rng).positive_part()
        assert norm_virtual(x, ctx) == tensor_induce(x, ctx.H)


@pytest.mark.parametrize("spec, sub", INCLUSIONS[:3], ids=str)
def test_abelian_addition_formula(grp, spec, sub):
    G = grp(spec)
    ctx = InclusionContext(G.whole(), find_subgroup(G, sub))
    rng = random.Random(4)
    for _ in range(10):
        x, y = rand_vc(ctx.tH, rng), rand_vc(ctx.tH, rng)
        assert abelian_norm_of_sum(x, y, ctx) == norm_virtual(x + y, ctx)


def test_norm_of_constants_counts_orbits(grp):
    # N(n)(g) = n ** (number of <g>-orbits on K/H)
    G = grp(cyclic(9))
    ctx = InclusionContext(G.whole(), find_subgroup(G, "C3"))
    cosets = {frozenset(G.mul(g, h) for h in ctx.H.elements) for g in range(G.order)}
    for n in (2, 3, -1):
        N = norm_virtual(VirtualCharacter.one(ctx.tH, n), ctx)
        assert N.augmentation() == n**3
        for g in range(G.order):
            orbits, seen = 0, set()
            for c in cosets:
                if c in seen:
                    continue
                orbits += 1
                while c not in seen:
                    seen.add(c)
                    c = frozenset(G.mul(g, x) for x in c)
            assert abs(value(N, ctx.K, g) - n**orbits) < 1e-8


def test_bad_inclusions(grp):
    G = grp(alternating4())
    with pytest.raises(TransferError):
        InclusionContext(G.whole(), sylow_subgroup(G, 3))  # index 4
    D = grp(dihedral(3))
    with pytest.raises(TransferError):
        InclusionContext(D.whole(), sylow_subgroup(D, 2))  # index 3, not normal
