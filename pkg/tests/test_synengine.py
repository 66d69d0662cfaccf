import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from synpoly import linalg as la
from synpoly.homcore import SpectralSequence
from synpoly.scalars import Poly, bezout_split, composed_product, is_admissible
from synpoly.synengine import (Filtration, GeometricPackage, NotInvertible, PackageError, PairingData,
                               SynComplex, SynCup, TraceContext, abs_cone, compare_prq, e2_pairing_matrices,
                               f1_inverse, f_filtration, gysin, gysin_adjunction_check, gysin_trace_check,
                               hk_exact_sequence, pairing, r3bis_check, tensor_packages, trace_map)
from synpoly.synengine import models as M
from synpoly.homcore import Complex

F = Fraction
seeds = st.integers(0, 10 ** 6)


def pdeg(*c):
    return Poly([F(x) for x in c])


def p_to_r_module(p, r):
    """Phi = p^r on a line, Fil^r = everything, Fil^{r+1} = 0."""
    return M.phi_module(p, la.mat([[p ** r]]), {r: la.eye(1), r + 1: la.zeros(1, 0)}, name="p^r")


# -- syntomic complexes ------------------------------------------------------------

def test_point_with_standard_polynomial():
    # 0 -> V -> V + V -> 0 with injective first map
    S = SynComplex(M.point(3), pdeg(1, F(-1, 3)), 1)
    assert S.betti() == {1: 1}


def test_zero_package_has_no_cohomology():
    C = Complex({})
    G = GeometricPackage(C, {}, C, Filtration(C, {0: {}}), {}, 5)
    S = SynComplex(G, pdeg(1, -1), 0)
    assert S.betti() == {}


@pytest.mark.parametrize("p,r", [(2, 1), (3, 2), (5, 1)])
def test_phi_equal_p_to_r(p, r):
    S = SynComplex(p_to_r_module(p, r), pdeg(1, F(-1, p ** r)), r)
    assert S.betti() == {0: 1, 1: 1}
    ff = f_filtration(S, 0)
    assert (ff.F0, ff.F1, ff.exact, ff.e2_agrees) == (1, 0, True, True)


def test_point_filtration_degree_one():
    S = SynComplex(M.point(3), pdeg(1, F(-1, 3)), 1)
    ff = f_filtration(S, 1)
    assert (ff.H, ff.F1, ff.F0, ff.exact) == (1, 1, 0, True)


def test_columns_outside_zero_one_vanish():
    S = SynComplex(M.random_package(3), pdeg(1, 2), 1)
    assert S.D.p_range[0] >= 0 and S.D.p_range[-1] <= 1


@settings(max_examples=25)
@given(seeds)
def test_filtration_splits_cohomology(seed):
    rng = random.Random(seed)
    G = M.random_package(rng, max_deg=2, max_dim=3)
    S = SynComplex(G, M.random_syn_poly(rng, G), rng.randint(0, 1))
    SS = SpectralSequence(S.D)
    for i in range(-1, max(S.T.degrees, default=0) + 2):
        ff = f_filtration(S, i)
        assert ff.exact and ff.e2_agrees
        assert ff.H == ff.F0 + ff.F1 == S.h(i)
    assert SS.check_abutment()


def test_cohomology_vanishes_above_top_plus_one():
    for seed in range(10):
        G = M.random_package(seed, max_deg=2, max_dim=2)
        S = SynComplex(G, pdeg(1, 1), 0)
        top = max(G.degrees)
        assert all(S.h(n) == 0 for n in range(top + 2, top + 5))


# -- change of (P, r) ---------------------------------------------------------------

def test_compare_identity():
    G = M.random_package(7, max_dim=2)
    S = SynComplex(G, pdeg(1, -2), 1)
    S2, f = compare_prq(S, pdeg(1, -2), 1)
    for n in S.T.degrees:
        assert f.at(n) == la.eye(S.T.dim(n))


def test_compare_from_trivial_polynomial():
    G = M.random_package(11, max_dim=2)
    S = SynComplex(G, pdeg(1), 1)
    Q = pdeg(1, 3, -1)
    S2, f = compare_prq(S, Q, 1)
    for n in S.T.degrees:
        du, dx, dy = S.dims(n)
        if not dx:
            continue
        x = la.mat([[j + 1] for j in range(dx)], dx, 1)
        out = S2.parts(n, f.at(n) * S.cochain(n, x=x))
        assert out[1] == G.P_of_Phi(Q, n - 1) * x


def test_compare_composes_along_divisor_chain():
    G = M.random_package(5, max_dim=2, fil_range=(0, 2))
    P, Pa, Pb = pdeg(1, 1), pdeg(1, -2), pdeg(1, F(1, 3))
    S = SynComplex(G, P, 2)
    Sa, f = compare_prq(S, P * Pa, 1)
    Sb, g = compare_prq(Sa, P * Pa * Pb, 0)
    _, h = compare_prq(S, P * Pa * Pb, 0)
    for n in S.T.degrees:
        assert g.at(n) * f.at(n) == h.at(n)


def test_compare_rejects_non_divisor():
    S = SynComplex(M.point(3), pdeg(1, 2), 1)
    with pytest.raises(ArithmeticError):
        compare_prq(S, pdeg(1, 3), 1)


def test_f1_inverse_on_point():
    S = SynComplex(M.point(3), pdeg(1, F(-1, 3)), 1)
    inv = f1_inverse(S, 1)
    assert inv.round_trips() == (True, True)
    assert inv.F0_prev_zero
    # (0; 0, y) -> y
    assert inv.backward(S.cochain(1, y=la.mat([[1]]))) == la.mat([[1]])
    # boundary of u maps to zero
    u = la.mat([[1]])
    bd = S.T.d(0) * S.cochain(0, u=u)
    assert la.is_zero(inv.backward(bd))


def test_f1_inverse_declines_with_witness():
    S = SynComplex(M.point(3), pdeg(1, -1), 0)
    with pytest.raises(NotInvertible) as e:
        f1_inverse(S, 1)
    assert la.shape(e.value.witness) == (1, 1) and not la.is_zero(e.value.witness)


@settings(max_examples=20)
@given(seeds)
def test_f1_inverse_round_trips_when_invertible(seed):
    rng = random.Random(seed)
    G = M.random_package(rng, max_deg=2, max_dim=2)
    P = M.random_poly(rng, 2)
    S = SynComplex(G, P, rng.randint(0, 1))
    for i in S.T.degrees:
        try:
            inv = f1_inverse(S, i)
        except NotInvertible:
            continue
        assert inv.round_trips() == (True, True)
        assert inv.F0_prev_zero


# -- monodromy and Hyodo-Kato ------------------------------------------------------------

def test_abs_cone_of_zero_monodromy():
    G = M.point(5)
    ab = abs_cone(G)
    assert ab.complex.betti() == {-1: 1, 0: 1}
    # H^{-1} sees Phi, H^0 sees p Phi
    assert ab.phi.on_cohomology(-1) == la.mat([[1]])
    assert ab.phi.on_cohomology(0) == la.mat([[5]])


def test_abs_cone_with_invertible_monodromy_is_acyclic():
    # Phi = diag(1, ...) cannot commute with an invertible N twisted by p; use a zero Phi
    N = la.mat([[0, 1], [1, 0]])
    G = M.phi_module(3, la.zeros(2, 2), {0: la.eye(2), 1: la.zeros(2, 0)}, N=N)
    assert abs_cone(G).complex.is_acyclic()


def test_relation_violation_names_the_degree():
    with pytest.raises(PackageError) as e:
        M.phi_module(3, la.mat([[1, 0], [0, 2]]), {0: la.eye(2), 1: la.zeros(2, 0)},
                     N=la.mat([[0, 0], [1, 0]]))
    assert "N Phi != p Phi N" in str(e.value) and "degree 0" in str(e.value)


def test_hk_sequence_point():
    G = M.point(3)
    h0, h1 = hk_exact_sequence(G, 0), hk_exact_sequence(G, 1)
    assert (h0.coker_dim, h0.abs_dim, h0.ker_dim) == (0, 1, 1)
    assert (h1.coker_dim, h1.abs_dim, h1.ker_dim) == (1, 1, 0)
    assert h0.exact and h0.equivariant and h1.exact and h1.equivariant


def test_hk_nilpotent_monodromy_on_a_plane():
    # e1 -> e2 with Phi = diag(1, 1/p): coker and ker of N are both one-dimensional
    p = 3
    G = M.phi_module(p, la.mat([[1, 0], [0, F(1, p)]]), {0: la.eye(2), 1: la.zeros(2, 0)},
                     N=la.mat([[0, 0], [1, 0]]))
    h = hk_exact_sequence(G, 1)
    assert (h.coker_dim, h.abs_dim, h.ker_dim) == (1, 1, 0)
    h = hk_exact_sequence(G, 0)
    assert (h.coker_dim, h.abs_dim, h.ker_dim) == (0, 1, 1)
    assert h.exact and h.equivariant


@settings(max_examples=20)
@given(seeds)
def test_hk_sequence_exact_and_equivariant(seed):
    G = M.random_phi_N_package(seed)
    A = G.C_an
    for i in range(min(A.degrees) - 1, max(A.degrees) + 2):
        h = hk_exact_sequence(G, i)
        assert h.exact and h.equivariant
        assert h.abs_dim == h.coker_dim + h.ker_dim


# -- trace --------------------------------------------------------------------------------

def point_trace(P, r, p=3):
    G = M.point(p)
    cert = is_admissible(P, r, 0, 1, None, p)
    return TraceContext(G, la.mat([[1]]), P, r, cert, top=0)


def test_trace_values_on_point():
    P = pdeg(1, F(1, 5))
    ctx = point_trace(P, 1)
    S = ctx.S
    one = la.mat([[1]])
    assert trace_map(ctx, S.cochain(1, y=one)) == one
    # (x, gamma P(Phi)^{-1} x) with P(Phi) = 6/5
    x = la.mat([[F(6, 5)]])
    assert la.is_zero(trace_map(ctx, S.cochain(1, x=x, y=one)))
    bd = S.T.d(0) * S.cochain(0, u=la.mat([[7]]))
    assert la.is_zero(trace_map(ctx, bd))


def test_trace_requires_certificate():
    from synpoly.synengine import InadmissibleError
    G = M.point(3)
    with pytest.raises(InadmissibleError):
        TraceContext(G, la.mat([[1]]), pdeg(1, F(-1, 3)), 1, is_admissible(pdeg(1, F(-1, 3)), 1, 0, 1, None, 3),
                     top=0)


def test_trace_compatible_with_compare():
    P, Pp = pdeg(1, F(1, 5)), pdeg(1, 2)
    ctx, ctx2 = point_trace(P, 1), point_trace(P * Pp, 1)
    _, f = compare_prq(ctx.S, P * Pp, 1)
    reps = ctx.S.T.cohomology(1).reps
    assert trace_map(ctx, reps) == trace_map(ctx2, f.at(1) * reps)


@settings(max_examples=20)
@given(seeds)
def test_trace_representative_independent(seed):
    rng = random.Random(seed)
    ctx = point_trace(pdeg(1, F(1, 5)), 1)
    S = ctx.S
    rep = S.T.cohomology(1).reps
    b = la.mat([[rng.randint(-5, 5)]])
    assert trace_map(ctx, rep + S.T.d(0) * b) == trace_map(ctx, rep)


# -- cups and pairings ----------------------------------------------------------------------

def point_cup():
    p = 3
    G = M.point(p)
    G3, m_an, m_dR = tensor_packages(G, G)
    P1, P2 = pdeg(1, F(1, 5)), pdeg(1, -1)
    split = bezout_split(P1, P2, "x2")
    PD = PairingData(G, G, G3, m_an, m_dR, lam=1, split=split)
    S1, S2 = SynComplex(G, P1, 1), SynComplex(G, P2, 0)
    P3 = composed_product(P1, P2)
    ctx = TraceContext(G3, la.mat([[1]]), P3, 1, is_admissible(P3, 1, 0, 1, None, p), top=0)
    return SynCup(S1, S2, PD, ctx.S), ctx


def test_cup_table_kills_pairs_of_column_one_terms():
    cup, _ = point_cup()
    assert cup._block(1, 0, 1, 0) is None
    assert la.is_zero(cup.family.block(1, 0, 1, 0))


def test_cup_leibniz_and_filtration_on_point():
    cup, _ = point_cup()
    assert not cup.leibniz().failures
    assert cup.total.leibniz_ok()
    assert cup.respects_filtration(1, 0)


def test_point_pairing_value():
    # split p1 = 1, p2 = -X1/5; Tr(x, y) = y - (6/5)^{-1} x on the class (1, 0)
    cup, ctx = point_cup()
    assert pairing(cup, ctx, 1) == la.mat([[F(-5, 6)]])
    assert pairing(cup, ctx, 0).ncols() == 1 and pairing(cup, ctx, 0).nrows() == 0


def test_point_pairing_matches_de_rham():
    cup, ctx = point_cup()
    rep = r3bis_check(cup, ctx, 1)
    assert rep.ok and rep.syntomic == la.mat([[1]])


def test_splitting_mismatch_rejected():
    G = M.point(3)
    G3, m_an, m_dR = tensor_packages(G, G)
    P1, P2 = pdeg(1, F(1, 5)), pdeg(1, -1)
    p1, p2 = bezout_split(P1, P2, "x2")
    PD = PairingData(G, G, G3, m_an, m_dR, lam=1, split=(p1, p1))
    with pytest.raises(PackageError):
        SynCup(SynComplex(G, P1, 1), SynComplex(G, P2, 0), PD)


@settings(max_examples=15)
@given(seeds)
def test_random_cup_is_leibniz_and_filtered(seed):
    G1, G2, G3, m_an, m_dR, P1, P2, r1, r2 = M.random_pairing_setup(seed, max_deg=2, max_dim=2)
    PD = PairingData(G1, G2, G3, m_an, m_dR, lam=1, split=bezout_split(P1, P2, "x2"))
    cup = SynCup(SynComplex(G1, P1, r1), SynComplex(G2, P2, r2), PD)
    assert not cup.leibniz().failures
    for n1 in cup.S1.T.degrees:
        for n2 in cup.S2.T.degrees:
            assert cup.respects_filtration(n1, n2)


def test_e2_products_independent_of_splitting_on_a_fixed_seed():
    G1, G2, G3, m_an, m_dR, P1, P2, r1, r2 = M.random_pairing_setup(0, max_deg=2, max_dim=2)
    S1, S2 = SynComplex(G1, P1, r1), SynComplex(G2, P2, r2)
    mats = []
    for variant in ("x2", "x1"):
        PD = PairingData(G1, G2, G3, m_an, m_dR, lam=1, split=bezout_split(P1, P2, variant))
        mats.append(e2_pairing_matrices(SynCup(S1, S2, PD)))
    assert mats[0] == mats[1]


# -- Gysin ----------------------------------------------------------------------------------

def curve_certs(B, P1, r1, P2, r2):
    p = B.G.p
    P3 = composed_product(P1, P2)
    cX = is_admissible(P3, r1 + r2, 1, 1, None, p)
    cF = is_admissible(P3.scale_var(p), r1 + r2 - 1, 0, 1, None, p)
    return P3, cX, cF


def test_gysin_on_curve_with_point():
    B = M.curve_point_bundle(3)
    P = pdeg(1, F(1, 5))
    g = gysin(B, P, 2, 3, rng=random.Random(0))
    assert g.matrix == la.mat([[1]]) and g.agrees and g.lift_independent
    for i in (0, 1, 2):
        other = gysin(B, P, 2, i)
        assert other.agrees and other.matrix.ncols() == 0


def test_gysin_adjunctions_on_curve_with_point():
    # pairing on the point side is y - (1 + 3/5)^{-1} x on the class (1, 0)
    B = M.curve_point_bundle(3)
    P1, P2 = pdeg(1, F(1, 5)), pdeg(1, -1)
    P3, cX, cF = curve_certs(B, P1, 2, P2, 0)
    assert cX and cF
    v = gysin_adjunction_check(B, P1, 2, P2, 0, 3, bezout_split(P1, P2, "x2"), cX, cF, which="first")
    assert v.ok and v.lhs == v.rhs == la.mat([[F(-5, 8)]])
    v = gysin_adjunction_check(B, P2, 0, P1, 2, 0, bezout_split(P2, P1, "x2"), cX, cF, which="second")
    assert v.ok and v.lhs == v.rhs == la.mat([[F(-5, 8)]])
    assert gysin_trace_check(B, P3, 2, cX, cF)


def test_gysin_snake_agreement_random_bundles():
    for seed in range(6):
        B = M.random_gysin_bundle(seed)
        P = pdeg(1, F(1, 5))
        for i in range(0, 4):
            g = gysin(B, P, 2, i, rng=random.Random(seed))
            assert g.agrees and g.lift_independent
