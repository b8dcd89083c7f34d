import random

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from gradedchar.zlattice import (
    AbelianInvariants,
    IntLattice,
    QuotientPresentation,
    lattice_sum,
    smith_normal_form,
)

small_matrix = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-9, 9), min_size=cols, max_size=cols), min_size=rows, max_size=rows)
    )
)


def sympy_divisors(M):
    D = sympy_snf(Matrix(M), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)))


@settings(max_examples=200, deadline=None)
@given(small_matrix)
def test_snf_matches_sympy(M):
    diag, V, Vinv = smith_normal_form(M, len(M[0]))
    assert sorted(abs(d) for d in diag) == sympy_divisors(M)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    n = len(M[0])
    prod = [[sum(V[i][k] * Vinv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_hnf_is_canonical_and_spans(M):
    n = len(M[0])
    L = IntLattice.from_generators(M, n)
    rng = random.Random(0)
    shuffled = [list(r) for r in M]
    rng.shuffle(shuffled)
    mixed = shuffled + [[a + b for a, b in zip(shuffled[0], shuffled[-1])]]
    assert IntLattice.from_generators(mixed, n) == L
    for row in M:
        assert L.contains(row)
    for row in L.basis:
        c = IntLattice.from_generators(M, n).coordinates(row)
        assert c is not None
    # rank agrees with sympy
    assert L.dim == Matrix(M).rank()


def test_quotient_of_lattices():
    big = IntLattice.full(2)
    small = IntLattice.from_generators([[2, 0], [0, 6]], 2)
    q = QuotientPresentation(big, small)
    assert q.invariants == AbelianInvariants.from_divisors([2, 6])
    assert q.order([1, 1]) == 6
    assert q.order([0, 3]) == 2
    assert q.is_zero([4, 12])


def test_quotient_with_free_part():
    q = QuotientPresentation(IntLattice.full(3), IntLattice.from_generators([[4, 0, 0]], 3))
    assert q.invariants == AbelianInvariants.from_divisors([4], free_rank=2)
    assert q.order([0, 1, 0]) is None


def test_invariant_normalization():
    a = AbelianInvariants.from_divisors([2, 3, 4])
    assert a.divisors == (2, 12)
    assert a.order == 24
    assert a.p_part(2) == AbelianInvariants.from_divisors([2, 4])
    assert str(AbelianInvariants.from_divisors([])) == "0"
    assert a + AbelianInvariants.from_divisors([3]) == AbelianInvariants.from_divisors([6, 12])


def test_lattice_sum_and_containment():
    A = IntLattice.from_generators([[2, 0]], 2)
    B = IntLattice.from_generators([[0, 3]], 2)
    S = lattice_sum(A, B)
    assert S.contains_lattice(A) and S.contains_lattice(B)
    assert S.index_in_full() == 6
    assert not A.contains([1, 0])
