from fractions import Fraction as F
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from synpoly.scalars import (BaseFieldK0, CycElt, EigenData, Poly, Poly2, annihilator_poly,
                             bezout_split, composed_product, composed_product_resultant,
                             is_admissible, shift_split, split_residual, weil_admissibility)

X = sympy.Symbol("X")

coef = st.fractions(min_value=-3, max_value=3, max_denominator=3)
ct1_poly = st.lists(coef, min_size=0, max_size=3).map(lambda cs: Poly([1] + cs))


def sym(P):
    return sum(sympy.Rational(str(c)) * X ** i for i, c in enumerate(P))


def from_sym(expr):
    cs = sympy.Poly(sympy.expand(expr), X).all_coeffs()[::-1]
    return Poly([F(str(c)) for c in cs])


def oracle_composed(P1, P2):
    """Through the roots of the reversed polynomials, irrespective of multiplicity."""
    if P1.degree <= 0 or P2.degree <= 0:
        return Poly([1])
    Y = sympy.Symbol("Y")
    R1 = sympy.Poly(sum(sympy.Rational(str(c)) * Y ** (P1.degree - i) for i, c in enumerate(P1)), Y)
    # Res_Y(R1(Y), P2(X Y)) is prod over roots a of R1 of P2(a X), up to a constant
    inner = sum(sympy.Rational(str(c)) * (X * Y) ** i for i, c in enumerate(P2))
    res = sympy.resultant(R1.as_expr(), sympy.expand(inner), Y)
    P = sympy.Poly(sympy.expand(res), X)
    cs = P.all_coeffs()[::-1]
    return Poly([F(str(c / cs[0])) for c in cs])


# -- composed products -----------------------------------------------------------

def test_composed_product_single_roots():
    assert composed_product(Poly([1, -2]), Poly([1, -3])) == Poly([1, -6])


def test_composed_product_with_unit():
    assert composed_product(Poly([1]), Poly([1, 5, 7])) == Poly([1])


def test_composed_product_factored_pair():
    # root pairs of (1-X)(1-2X) with 1-3X: 1*3 and 2*3
    P1 = Poly([1, -1]) * Poly([1, -2])
    assert composed_product(P1, Poly([1, -3])) == from_sym((1 - 3 * X) * (1 - 6 * X))


def test_composed_product_rejects_bad_constant_term():
    with pytest.raises(ValueError):
        composed_product(Poly([2, 1]), Poly([1, 1]))


@given(ct1_poly, ct1_poly)
def test_composed_product_both_routes_and_sympy(P1, P2):
    C = composed_product(P1, P2)
    assert C == composed_product_resultant(P1, P2)
    assert C == oracle_composed(P1, P2)
    assert C[0] == 1
    assert C.degree == (P1.degree * P2.degree if P1.degree > 0 and P2.degree > 0 else 0)


@given(ct1_poly, ct1_poly, ct1_poly)
def test_composed_product_commutative_associative(A, B, C):
    assert composed_product(A, B) == composed_product(B, A)
    assert composed_product(composed_product(A, B), C) == composed_product(A, composed_product(B, C))


# -- Bezout splittings ------------------------------------------------------------------

def test_split_linear_pair():
    a, b = F(2), F(5)
    p1, p2 = bezout_split(Poly([1, -a]), Poly([1, -b]))
    assert p1 == Poly2({(0, 0): 1})
    assert p2 == Poly2({(1, 0): a})


def test_split_with_unit():
    p1, p2 = bezout_split(Poly([1]), Poly([1, 3, 1]))
    assert p1 == Poly2({(0, 0): 1}) and p2.is_zero()


@given(ct1_poly, ct1_poly, st.sampled_from(["x1", "x2"]))
def test_split_identity_expands_to_zero(P1, P2, variant):
    p1, p2 = bezout_split(P1, P2, variant)
    assert split_residual(P1, P2, p1, p2).is_zero()
    if variant == "x2" and P2.degree > 0:
        assert p1.deg_x2() < P2.degree
    if variant == "x1" and P1.degree > 0:
        assert p2.deg_x1() < P1.degree


def test_split_symbolic_check():
    P1, P2 = Poly([1, F(1, 2), -1]), Poly([1, 0, 3])
    p1, p2 = bezout_split(P1, P2)
    x1, x2 = sympy.symbols("x1 x2")
    C = composed_product(P1, P2)
    lhs = sum(sympy.Rational(str(c)) * (x1 * x2) ** i for i, c in enumerate(C))
    rhs = (sum(sympy.Rational(str(v)) * x1 ** i * x2 ** j for (i, j), v in p1.t.items())
           * sum(sympy.Rational(str(c)) * x1 ** i for i, c in enumerate(P1))
           + sum(sympy.Rational(str(v)) * x1 ** i * x2 ** j for (i, j), v in p2.t.items())
           * sum(sympy.Rational(str(c)) * x2 ** i for i, c in enumerate(P2)))
    assert sympy.expand(lhs - rhs) == 0


def test_shifted_split_is_still_a_split():
    P1, P2 = Poly([1, 2]), Poly([1, -1, 1])
    p1, p2 = bezout_split(P1, P2)
    q1, q2 = shift_split(P1, P2, p1, p2, Poly2({(1, 1): 3, (0, 0): -1}))
    assert split_residual(P1, P2, q1, q2).is_zero() and q1 != p1


# -- annihilators -------------------------------------------------------------------

def test_annihilator_single_block():
    p = 5
    assert annihilator_poly([EigenData([[p]])], 1) == Poly([1, F(-1, p)])


def test_annihilator_empty():
    assert annihilator_poly([], 1) == Poly([1])


def test_annihilator_two_blocks():
    p = 3
    P = annihilator_poly([EigenData([[p]]), EigenData([[1]])], 1)
    assert P == from_sym(sympy.expand((X - p) * (X - 1)) / p)
    assert P(p) == 0 and P(1) == 0 and P[0] == 1


def test_annihilator_rejects_singular_block():
    with pytest.raises(ValueError):
        annihilator_poly([EigenData([[0, 1], [0, 0]])], 1)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2),
       st.integers(1, 3))
def test_annihilator_kills_block(M, m):
    A = sympy.Matrix(M)
    if A.det() == 0:
        return
    P = annihilator_poly([EigenData(M)], m)
    val = sum((sympy.Rational(str(c)) * A ** i for i, c in enumerate(P)), sympy.zeros(2, 2))
    assert val == sympy.zeros(2, 2) and P[0] == 1


# -- admissibility ---------------------------------------------------------------------

def root_poly(alpha):
    """1 - X/alpha: the polynomial whose root is alpha."""
    return Poly([1, -1 / F(alpha)])


def test_admissible_alpha_p_squared():
    p = 3
    v = is_admissible(root_poly(p * p), 2, 0, 1, p=p)
    assert v.ok


def test_admissible_violations():
    p, d = 5, 1
    assert is_admissible(root_poly(p ** d), 2, d, 1, p=p).reason.startswith("(i)")
    assert is_admissible(root_poly(p ** (d + 1)), 2, d, 1, p=p).reason.startswith("(ii)")
    assert not is_admissible(root_poly(7), d, d, 1, p=p)


def test_admissible_mu_f_roots_eliminated():
    # alpha = -p with f = 2: alpha^2 = p^2 = p^{(d+1) f} for d = 0
    p = 3
    assert not is_admissible(root_poly(-p), 1, 0, 2, p=p)
    assert is_admissible(root_poly(-p), 1, 0, 1, p=p)


def test_admissible_condition_iii():
    p, d = 3, 0
    # lambda = 1/2: (p/alpha) = 1/2 when alpha = 2p, so alpha = 2p is excluded by (iii)
    hk1 = EigenData([[F(1, 2)]])
    assert is_admissible(root_poly(2 * p), 1, d, 1, p=p)
    v = is_admissible(root_poly(2 * p), 1, d, 1, hk1=hk1, p=p)
    assert not v and v.reason.startswith("(iii)")


def test_weil_examples():
    p, d = 3, 1
    assert weil_admissibility(root_poly(2 * p ** (d + 1)), d + 1, d, 1, p)
    # alpha^2 = p^{2d+1}: X^2 = p^3 has no rational root, encode by 1 - X^2/p^3
    assert not weil_admissibility(Poly([1, 0, F(-1, p ** 3)]), d + 1, d, 1, p)
    assert weil_admissibility(Poly([1]), d + 1, d, 1, p)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2), st.integers(1, 3),
       st.lists(st.fractions(min_value=-30, max_value=30, max_denominator=4).filter(bool),
                min_size=1, max_size=2))
def test_weil_implies_admissible(p, d, f, alphas):
    P = Poly([1])
    for a in alphas:
        P = P * root_poly(a)
    if weil_admissibility(P, d + 1, d, f, p):
        assert is_admissible(P, d + 1, d, f, p=p)


# -- the cyclotomic model of K0 ---------------------------------------------------

@pytest.mark.parametrize("p,f", [(2, 2), (3, 2), (2, 3)])
def test_sigma_is_an_automorphism_of_order_f(p, f):
    K = BaseFieldK0(p, f)
    z = K.zeta()
    x = z * 2 + 1
    y = z * z - z * 3
    assert K.sigma(x * y) == K.sigma(x) * K.sigma(y)
    assert K.sigma(x + y) == K.sigma(x) + K.sigma(y)
    assert K.sigma(x, f) == x
    if f > 1:
        assert K.sigma(z) != z
    assert x * x.inverse() == K.one()


def test_unramified_degree_one_is_rational():
    K = BaseFieldK0(5, 1)
    assert K.sigma(F(3, 7)) == F(3, 7)
