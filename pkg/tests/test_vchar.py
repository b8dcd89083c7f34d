import random

import pytest

from gradedchar.group import alternating4, cyclic, dihedral, product, quaternion8
from gradedchar.vchar import (
    VirtualCharacter,
    adams,
    chern_rep,
    gamma_op,
    gamma_series,
    lambda_op,
    lambda_series,
    series_product,
)

SPECS = [cyclic(4), cyclic(6), dihedral(3), dihedral(5), quaternion8(), alternating4(), product(cyclic(2), cyclic(2))]


def irr(t, i):
    return VirtualCharacter.irreducible(t, i)


def test_product_matches_pointwise_values(table_of):
    t = table_of(alternating4())
    rng = random.Random(1)
    for _ in range(20):
        x = VirtualCharacter(t, [rng.randint(-3, 3) for _ in range(t.r)])
        y = VirtualCharacter(t, [rng.randint(-3, 3) for _ in range(t.r)])
        assert (x * y).values() == [a * b for a, b in zip(x.values(), y.values())]


def test_adams_matches_power_map(grp, table_of):
    G, t = grp(dihedral(5)), table_of(dihedral(5))
    for i in range(t.r):
        for k in (2, 3, 5):
            want = [t.values[i][G.classes.power(k, c)] for c in range(t.r)]
            assert adams(k, irr(t, i)).values() == want


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_lambda_and_gamma_series_are_multiplicative(table_of, spec):
    t = table_of(spec)
    rng = random.Random(3)
    for _ in range(4):
        x = VirtualCharacter(t, [rng.randint(-2, 2) for _ in range(t.r)])
        y = VirtualCharacter(t, [rng.randint(-2, 2) for _ in range(t.r)])
        assert lambda_series(x + y, 6) == series_product(lambda_series(x, 6), lambda_series(y, 6), 6)
        assert gamma_series(x + y, 6) == series_product(gamma_series(x, 6), gamma_series(y, 6), 6)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_exterior_powers_vanish_above_degree(table_of, spec):
    t = table_of(spec)
    for i in range(t.r):
        rho = irr(t, i)
        d = t.degrees[i]
        assert lambda_op(d + 1, rho).is_zero()
        det = lambda_op(d, rho)
        assert det.augmentation() == 1 and det.is_actual()
        for n in range(d + 1, 7):
            assert gamma_op(n, rho - d).is_zero()


def test_a4_identities(table_of):
    t = table_of(alternating4())
    one, rho, rho_bar, theta = (irr(t, i) for i in range(4))
    assert lambda_op(2, theta) == theta
    assert lambda_op(3, theta) == one
    assert theta * theta == one + rho + rho_bar + 2 * theta
    assert rho * rho == rho_bar


def test_dihedral_determinant_is_sign(table_of):
    t = table_of(dihedral(5))
    assert lambda_op(2, irr(t, 2)) == irr(t, 1)


def test_chern_classes_of_sums(table_of):
    # total Chern class is multiplicative: C_2(a + b) = C_2(a) + C_1(a)C_1(b) + C_2(b)
    t = table_of(quaternion8())
    a, b = irr(t, 1), irr(t, 4)
    lhs = chern_rep(2, a + b)
    rhs = chern_rep(2, a) + chern_rep(1, a) * chern_rep(1, b) + chern_rep(2, b)
    assert lhs == rhs


def test_chern_classes_need_actual_characters(table_of):
    t = table_of(cyclic(3))
    with pytest.raises(ValueError):
        chern_rep(1, irr(t, 1) - irr(t, 2))


def test_arithmetic_and_repr(table_of):
    t = table_of(alternating4())
    x = irr(t, 1) - 1
    assert repr(x) == "-r0 + r1"
    assert repr(2 * irr(t, 1) - irr(t, 3)) == "2*r1 - r3"
    assert x.augmentation() == 0
    assert (x + 1) - irr(t, 1) == 0
