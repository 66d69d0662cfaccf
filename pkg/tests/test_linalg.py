from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from synpoly import linalg as la

small = st.integers(-4, 4)


def matrices(max_m=4, max_n=4):
    return st.integers(0, max_m).flatmap(
        lambda m: st.integers(0, max_n).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
            .map(lambda rows: la.mat(rows, m, n))))


def to_sympy(A):
    return sympy.Matrix(A.nrows(), A.ncols(), lambda i, j: sympy.Rational(str(la.to_fraction(A[i, j]))))


def test_rational_entries_are_exact():
    A = la.mat([["1/3", 2], [Fraction(-5, 7), 0]])
    assert la.to_fraction(A[0, 0]) == Fraction(1, 3)
    assert la.det(A) == la.q(Fraction(10, 7))


def test_empty_shapes():
    Z = la.zeros(0, 3)
    assert la.rank(Z) == 0
    assert la.nullspace(Z).ncols() == 3
    assert la.hstack(la.zeros(2, 0), la.zeros(2, 0), nrows=2).ncols() == 0


def test_kron_index_convention():
    A, B = la.mat([[1, 2]]), la.mat([[0], [1]])
    K = la.kron(A, B)
    # (i1, i2) -> i1 * rows(B) + i2
    assert la.shape(K) == (2, 2)
    assert K[1, 0] == 1 and K[1, 1] == 2 and K[0, 0] == 0


@given(matrices())
def test_rank_matches_sympy(A):
    assert la.rank(A) == to_sympy(A).rank()


@given(matrices())
def test_nullspace_is_kernel(A):
    N = la.nullspace(A)
    assert N.ncols() == A.ncols() - la.rank(A)
    if N.ncols() and A.nrows():
        assert la.is_zero(A * N)


@given(matrices(), st.integers(1, 3), st.randoms(use_true_random=False))
def test_solve_consistent_systems(A, k, rnd):
    X = la.mat([[rnd.randint(-3, 3) for _ in range(k)] for _ in range(A.ncols())], A.ncols(), k)
    B = A * X
    Y = la.solve(A, B)
    assert Y is not None and A * Y == B


def test_solve_insoluble_returns_none():
    assert la.solve(la.mat([[1], [1]]), la.mat([[0], [1]])) is None


@given(matrices(3, 3), matrices(3, 3))
def test_intersection_dimension(U, V):
    if U.nrows() != V.nrows():
        return
    n = U.nrows()
    I = la.intersect(U, V)
    assert la.rank(I) == la.rank(U) + la.rank(V) - la.rank(la.hstack(U, V, nrows=n))
    if I.ncols():
        assert la.contains(U, I) and la.contains(V, I)


def test_coordinates_round_trip():
    B = la.mat([[1, 0], [1, 1], [0, 2]])
    C = la.Coordinates(B)
    v = B * la.mat([[3], [-1]])
    assert C.of(v) == la.mat([[3], [-1]])
