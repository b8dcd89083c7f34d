import pytest

from gradedchar.chartab import TableUnavailable, character_table, structure_name
from gradedchar.group import alternating4, cyclic, dihedral, product, psl2, quaternion8
from gradedchar.vchar import VirtualCharacter

TABLE_GROUPS = [
    cyclic(1),
    cyclic(5),
    cyclic(12),
    dihedral(3),
    dihedral(4),
    dihedral(5),
    quaternion8(),
    alternating4(),
    product(cyclic(2), cyclic(2)),
    product(cyclic(4), cyclic(4)),
    product(dihedral(3), cyclic(2)),
    product(alternating4(), cyclic(2)),
    product(quaternion8(), cyclic(3)),
]


@pytest.mark.parametrize("spec", TABLE_GROUPS, ids=str)
def test_orthogonality(table_of, spec):
    table_of(spec).check_orthogonality()


@pytest.mark.parametrize("spec", TABLE_GROUPS, ids=str)
def test_square_root_count_oracle(grp, table_of, spec):
    # sum_chi nu(chi) chi(g) = #{x : x^2 = g}, with nu read off chi(x^2)
    G, t = grp(spec), table_of(spec)
    roots = [0] * G.order
    for x in range(G.order):
        roots[G.mul(x, x)] += 1
    cls = G.classes
    nus = []
    for i in range(t.r):
        s = sum(complex(t.values[i][cls.class_of[G.mul(x, x)]]) for x in range(G.order))
        nus.append(round((s / G.order).real))
        assert abs(s / G.order - nus[-1]) < 1e-8
    for c, g in enumerate(cls.reps):
        val = sum(nu * complex(t.values[i][c]) for i, nu in enumerate(nus))
        assert abs(val - roots[g]) < 1e-8


@pytest.mark.parametrize("spec", TABLE_GROUPS, ids=str)
def test_column_orthogonality_numeric(grp, table_of, spec):
    G, t = grp(spec), table_of(spec)
    k = t.r
    for a in range(k):
        for b in range(k):
            s = sum(complex(t.values[i][a]) * complex(t.values[i][b]).conjugate() for i in range(k))
            want = G.order / G.classes.sizes[a] if a == b else 0
            assert abs(s - want) < 1e-8


def test_row_zero_is_trivial_and_degrees(table_of):
    for spec, degrees in (
        (alternating4(), [1, 1, 1, 3]),
        (quaternion8(), [1, 1, 1, 1, 2]),
        (dihedral(5), [1, 1, 2, 2]),
    ):
        t = table_of(spec)
        assert t.degrees == degrees
        assert all(v == 1 for v in t.values[0])


def test_decompose_round_trip(table_of):
    t = table_of(alternating4())
    x = VirtualCharacter(t, [2, -1, 0, 3])
    assert t.decompose(x.values()) == list(x.coeffs)


def test_structure_names(grp):
    assert structure_name(grp(product(cyclic(2), cyclic(2)))) == "C2xC2"
    assert structure_name(grp(dihedral(4))) == "D4"
    assert structure_name(grp(quaternion8())) == "Q8"
    assert structure_name(grp(psl2(3))) == "A4"


def test_unavailable_table(grp):
    with pytest.raises(TableUnavailable):
        character_table(grp(psl2(5)))
