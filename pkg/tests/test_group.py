import pytest

from gradedchar.group import (
    GroupError,
    alternating4,
    center,
    conjugacy_classes_of_subgroups,
    cyclic,
    dihedral,
    normalizer,
    product,
    psl2,
    quaternion8,
    subgroup_lattice,
    sylow_subgroup,
    transversal,
)

CATALOG = [cyclic(6), dihedral(4), quaternion8(), alternating4(), product(cyclic(2), cyclic(4)), psl2(5)]


@pytest.mark.parametrize("spec", CATALOG, ids=str)
def test_group_axioms(grp, spec):
    G = grp(spec)
    G.check_axioms()


@pytest.mark.parametrize(
    "spec, subgroups, classes",
    [
        (dihedral(4), 10, 8),
        (alternating4(), 10, 5),
        (quaternion8(), 6, 6),
        (cyclic(12), 6, 6),
        (product(cyclic(2), cyclic(2)), 5, 5),
        (dihedral(3), 6, 4),
        (psl2(5), 59, 9),
    ],
    ids=lambda v: str(v),
)
def test_subgroup_counts(grp, spec, subgroups, classes):
    G = grp(spec)
    assert len(subgroup_lattice(G)) == subgroups
    assert len(conjugacy_classes_of_subgroups(G)) == classes


def test_conjugacy_class_sizes(grp):
    assert sorted(grp(alternating4()).classes.sizes) == [1, 3, 4, 4]
    assert sorted(grp(quaternion8()).classes.sizes) == [1, 1, 2, 2, 2]
    assert sorted(grp(psl2(5)).classes.sizes) == [1, 12, 12, 15, 20]


def test_sylow_and_normalizers(grp):
    A5 = grp(psl2(5))
    assert A5.order == 60
    for p, order, norm in ((2, 4, 12), (3, 3, 6), (5, 5, 10)):
        P = sylow_subgroup(A5, p)
        assert P.order == order
        assert normalizer(A5, P).order == norm
    A4 = grp(alternating4())
    V = sylow_subgroup(A4, 2)
    assert V.is_normal() and not sylow_subgroup(A4, 3).is_normal()
    assert normalizer(A4, V).order == 12
    assert center(grp(quaternion8())).order == 2


def test_psl_orders(grp):
    assert grp(psl2(3)).order == 12
    assert grp(psl2(7)).order == 168


def test_transversal_covers_group(grp):
    G = grp(dihedral(5))
    H = sylow_subgroup(G, 2)
    reps = transversal(G, H)
    assert len(reps) == 5
    cover = {G.mul(r, h) for r in reps for h in H.elements}
    assert cover == set(range(G.order))


def test_bad_specs():
    with pytest.raises(GroupError):
        cyclic(0).validate()
    with pytest.raises(GroupError):
        psl2(4).validate()
