import pytest

from gradedchar import gset
from gradedchar.group import alternating4, cyclic, dihedral, product, quaternion8, subgroup_lattice, sylow_subgroup
from gradedchar.gset import (
    EquivBundle,
    GSetError,
    GSetMap,
    adjunction_counts,
    coset_projection,
    coset_space,
    disjoint_union,
    exponential_diagram,
    identity_map,
    irreducible_bundles,
    norm,
    pi_f,
    point,
    pull,
    pullback_gsets,
    push,
    tambara_axiom_suite,
    to_point,
)
from gradedchar.transfer import induce, restrict, tensor_induce
from gradedchar.vchar import VirtualCharacter


def double_coset_count(G, H, K):
    seen, count = set(), 0
    for g in range(G.order):
        if g in seen:
            continue
        count += 1
        seen.update(G.mul(G.mul(h, g), k) for h in H.elements for k in K.elements)
    return count


@pytest.mark.parametrize("spec", [dihedral(4), alternating4(), quaternion8()], ids=str)
def test_coset_space_actions(grp, spec):
    G = grp(spec)
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        X = coset_space(G, H)
        X.check_action()
        assert X.size == G.order // H.order
        assert X.stabilizer(X.anchors[0]) == H


def test_pullback_of_cosets_counts_double_cosets(grp):
    G = grp(alternating4())
    subs = subgroup_lattice(G, up_to_conjugacy=True)
    for H in subs:
        for K in subs:
            X, Y = coset_space(G, H), coset_space(G, K)
            pt = point(G)
            P, _, _ = pullback_gsets(to_point(X, pt), to_point(Y, pt))
            assert P.size == X.size * Y.size
            assert len(P.orbits) == double_coset_count(G, H, K)


def transitive(G, H, K):
    X, Y = coset_space(G, H), coset_space(G, K)
    return X, Y, coset_projection(X, Y, H, K)


@pytest.mark.parametrize("spec", [dihedral(4), alternating4(), product(cyclic(2), cyclic(4))], ids=str)
def test_transitive_maps_are_classical_transfers(grp, spec):
    G = grp(spec)
    K = G.whole()
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        X, Y, f = transitive(G, H, K)
        for V in irreducible_bundles(X):
            (x,) = V.fibers
            assert push(f, V).fibers[0] == induce(x, H)
            assert norm(f, V).fibers[0] == tensor_induce(x, H)
        for W in irreducible_bundles(Y):
            assert pull(f, W).fibers[0] == restrict(W.fibers[0], H)


def test_identity_map_acts_trivially(grp):
    G = grp(dihedral(3))
    X = coset_space(G, sylow_subgroup(G, 2))
    idm = identity_map(X)
    for V in irreducible_bundles(X):
        assert pull(idm, V) == V and push(idm, V) == V and norm(idm, V) == V


def test_dependent_product_examples(grp):
    G = grp(cyclic(2))
    X = coset_space(G, G.trivial())  # two points swapped
    Y = point(G)
    f = to_point(X, Y)
    Pi, q = pi_f(identity_map(X), f)
    assert Pi.size == 1
    # two-point fibers over each point of X give 2 * 2 sections
    U, iX, iY = disjoint_union(X, X)
    p = GSetMap(U, X, [0, 1, 0, 1])
    Pi, q = pi_f(p, f)
    assert Pi.size == 4
    Pi.check_action()


def test_dependent_product_bound(grp):
    G = grp(cyclic(4))
    X = coset_space(G, G.trivial())
    U, _, _ = disjoint_union(X, X)
    p = GSetMap(U, X, [0, 1, 2, 3] * 2)
    with pytest.raises(GSetError):
        pi_f(p, to_point(X), bound=8)


def test_exponential_diagram_shape(grp):
    G = grp(cyclic(2))
    X = coset_space(G, G.trivial())
    U, _, _ = disjoint_union(X, X)
    p = GSetMap(U, X, [0, 1, 0, 1])
    Pi, q, P, e, fprime = exponential_diagram(p, to_point(X))
    assert P.size == Pi.size * X.size
    for k in range(P.size):
        x, _ = P.labels[k]
        assert p(e(k)) == x


@pytest.mark.parametrize("spec", [cyclic(4), dihedral(3), alternating4()], ids=str)
def test_adjunction(grp, spec):
    G = grp(spec)
    subs = subgroup_lattice(G, up_to_conjugacy=True)
    for H in subs:
        for K in subs:
            if not H <= K:
                continue
            X, Y, f = transitive(G, H, K)
            A = coset_space(G, G.trivial())
            p = coset_projection(A, X, G.trivial(), H)
            for B in (Y, coset_space(G, G.trivial())):
                b = identity_map(Y) if B is Y else coset_projection(B, Y, G.trivial(), K)
                lhs, rhs = adjunction_counts(p, f, b)
                assert lhs == rhs


def test_norm_rejects_virtual_bundles(grp):
    G = grp(cyclic(2))
    X = coset_space(G, G.whole())
    V = EquivBundle(X, [-VirtualCharacter.one(G.whole().table())])
    with pytest.raises(GSetError):
        norm(to_point(X), V)


@pytest.mark.parametrize("spec", [cyclic(4), product(cyclic(2), cyclic(2)), dihedral(3)], ids=str)
def test_axiom_suite_passes(grp, spec):
    rep = tambara_axiom_suite(grp(spec))
    assert rep.passed and sum(rep.checks.values()) > 0


def test_axiom_suite_catches_a_broken_norm(grp, monkeypatch):
    monkeypatch.setattr(gset, "norm", gset.push)
    rep = tambara_axiom_suite(grp(cyclic(4)))
    assert not rep.passed
    assert rep.minimal_failure() is not None
