import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedchar.cyclotomic import CycInt

CONDUCTORS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15]


def close(a, b, tol=1e-8):
    return abs(complex(a) - complex(b)) < tol


@st.composite
def cyc(draw, conductor=None):
    e = conductor or draw(st.sampled_from(CONDUCTORS))
    terms = draw(st.dictionaries(st.integers(0, e - 1), st.integers(-5, 5), max_size=6))
    return CycInt.from_exponents(e, terms)


@settings(max_examples=150, deadline=None)
@given(cyc(), cyc())
def test_ring_ops_agree_with_complex_evaluation(a, b):
    assert close(a + b, complex(a) + complex(b))
    assert close(a - b, complex(a) - complex(b))
    assert close(a * b, complex(a) * complex(b), 1e-6)
    assert close(a.conj(), complex(a).conjugate())


@settings(max_examples=100, deadline=None)
@given(cyc(12), cyc(12), cyc(12))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


def test_zeta_powers():
    for e in CONDUCTORS:
        z = CycInt.zeta(e)
        assert close(z, cmath.exp(2j * cmath.pi / e))
        acc = CycInt.integer(1, e)
        for _ in range(e):
            acc = acc * z
        assert acc == 1


def test_sum_of_all_roots_vanishes():
    for e in (3, 5, 8, 9, 12):
        total = CycInt.from_exponents(e, {k: 1 for k in range(e)})
        assert total.is_zero()


@settings(max_examples=80, deadline=None)
@given(cyc(3), st.sampled_from([6, 12, 15]))
def test_lift_then_descend_round_trips(a, m):
    if m % 3:
        return
    up = a.lift(m)
    assert up == a
    assert up.descend(3).coeffs == a.coeffs


def test_descend_detects_subfield_membership():
    i = CycInt.zeta(4)
    assert i.lift(12).descend(4) == i
    assert i.lift(12).descend(3) is None
    sqrt_m3 = CycInt.zeta(3) - CycInt.zeta(3, 2)  # i*sqrt(3) lives in Q(zeta_3)
    assert sqrt_m3.lift(12).descend(3) == sqrt_m3


def test_galois_action():
    z = CycInt.zeta(5)
    assert z.galois(2) == CycInt.zeta(5, 2)
    assert z.galois(4) == z.conj()
    with pytest.raises(ValueError):
        z.galois(5)


def test_exact_division():
    x = CycInt.from_exponents(8, {0: 4, 3: -6})
    assert x.exact_div(2) * 2 == x
    with pytest.raises(ArithmeticError):
        x.exact_div(4)


def test_equality_across_conductors_and_hash():
    a = CycInt.integer(3)
    b = CycInt.integer(3, 12)
    assert a == b and hash(a) == hash(b)
    assert CycInt.zeta(4).lift(8) == CycInt.zeta(8, 2)
