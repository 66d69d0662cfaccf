"""Acceptance criteria 1-12 at desk scale; each prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines, or
``python scripts/run_acceptance.py`` for the summary table.
"""
import itertools
import random
import time
from fractions import Fraction

import pytest

from synpoly import gen
from synpoly import linalg as la
from synpoly.homcore import Complex, SpectralSequence, cech_cup, cech_double, cone, dbl_cup_leibniz_check
from synpoly.koszul import acyclicity_check, ideal_basis
from synpoly.padic import TruncPadicModule, TruncRing, contraction_holds, verify_automorphism
from synpoly.scalars import (BaseFieldK0, EigenData, Poly, annihilator_poly, bezout_split, composed_product,
                             composed_product_resultant, is_admissible, split_residual)
from synpoly.synengine import (NotInvertible, PairingData, SynComplex, SynCup, TraceContext, e2_pairing_matrices,
                               f1_inverse, f_filtration, gysin, gysin_adjunction_check, hk_exact_sequence,
                               r3bis_check, tensor_packages, trace_map)
from synpoly.synengine import models as M

F = Fraction
BUDGET = 60.0


def report(n, ok, detail, t0):
    dt = time.perf_counter() - t0
    line = "AC%-2d %s  %s  (%.1fs)" % (n, "PASS" if ok else "FAIL", detail, dt)
    print("\n" + line)
    assert dt < BUDGET, "AC%d exceeded the time budget" % n
    return ok


# -- 1. differentials square to zero ----------------------------------------------------------

def _d_squared_zero(C):
    return all(la.is_zero(C.d(q + 1) * C.d(q)) for q in C.degrees)


def test_ac01_d_squared():
    t0 = time.perf_counter()
    rng = random.Random(1)
    kinds = {"complex": 0, "cone": 0, "double": 0, "cech": 0}
    bad = 0
    for k in range(500):
        kind = ("complex", "cone", "double", "cech")[k % 4]
        if kind == "complex":
            C = gen.random_complex(rng, 0, 3, 4)
        elif kind == "cone":
            A, B = gen.random_complex(rng, 0, 2, 3), gen.random_complex(rng, 0, 2, 3)
            C = cone(gen.random_chain_map(rng, A, B))
        elif kind == "double":
            D = gen.random_double_complex(rng, ncols=3, qhi=2, max_dim=3)
            # d1 d1, d2 d2 and the anticommuting total differential
            for (p, q) in D.bidegrees:
                if not (la.is_zero(D.d1(p + 1, q) * D.d1(p, q)) and la.is_zero(D.d2(p, q + 1) * D.d2(p, q))):
                    bad += 1
            C = D.total()
        else:
            C = cech_double(gen.random_cech_system(rng, n_index=rng.randint(1, 3), max_N=3)).total()
        kinds[kind] += 1
        bad += not _d_squared_zero(C)
    ok = bad == 0
    assert report(1, ok, "500 instances %s, %d with d^2 != 0" % (kinds, bad), t0)


# -- 2. F-filtration decomposition -----------------------------------------------------------

def test_ac02_filtration_decomposition():
    t0 = time.perf_counter()
    bad = 0
    for seed in range(100):
        rng = random.Random(seed)
        G = M.random_package(rng, max_deg=3, max_dim=3, fil_range=(0, 2))
        P = M.random_syn_poly(rng, G, max_deg=3)
        S = SynComplex(G, P, rng.randint(0, 2))
        for i in range(-1, max(G.degrees) + 3):
            ff = f_filtration(S, i)
            if not (ff.exact and ff.e2_agrees and ff.H == ff.F0 + ff.F1):
                bad += 1
    assert report(2, bad == 0, "100 packages, %d degree checks failed" % bad, t0)


# -- 3. explicit inverse on F^1 ----------------------------------------------------------------

def _invertible_everywhere(G, P):
    for q in G.C_an.degrees:
        Mq = G.P_of_Phi_map(P).on_cohomology(q)
        if Mq.ncols() and la.rank(Mq) < Mq.ncols():
            return False
    return True


def test_ac03_f1_inverse():
    t0 = time.perf_counter()
    rng = random.Random(3)
    done = bad = declined = refused = 0
    while done < 50:
        G = M.random_package(rng, max_deg=2, max_dim=3)
        P = M.random_syn_poly(rng, G, 3, p_annihilate=0.3)
        if not _invertible_everywhere(G, P):
            # the engine must decline with a witness
            refused += 1
            S = SynComplex(G, P, 1)
            for i in S.T.degrees:
                try:
                    f1_inverse(S, i)
                except NotInvertible as e:
                    declined += not la.is_zero(e.witness)
                    break
            continue
        S = SynComplex(G, P, rng.randint(0, 1))
        for i in range(min(G.degrees), max(G.degrees) + 3):
            inv = f1_inverse(S, i)
            if inv.round_trips() != (True, True) or not inv.F0_prev_zero:
                bad += 1
        done += 1
    ok = bad == 0 and declined == refused
    assert report(3, ok, "50 packages, %d failures; %d non-invertible draws, %d declined with a witness"
                  % (bad, refused, declined), t0)


# -- 4. P(Phi) automorphism of mM --------------------------------------------------------------

def _random_padic_module(rng, p, n, r, rank):
    R = TruncRing(p, n, r, 8, 12)
    one = (tuple([0] * r), tuple([0] * r))
    for _ in range(100):
        A = [[{} for _ in range(rank)] for _ in range(rank)]
        for i in range(rank):
            for j in range(rank):
                A[i][j][one] = F(rng.randint(-2, 2))
                for v in range(r):
                    z = tuple(int(k == v) for k in range(r))
                    a = tuple(x % n for x in z)
                    b = tuple(x // n for x in z)
                    A[i][j][(a, b)] = F(rng.randint(-2, 2))
        M0 = TruncPadicModule(R, A)
        P = Poly([1, F(rng.choice([1, -1, 2, -2]), p ** rng.randint(0, 1))])
        if contraction_holds(M0, P):
            return M0, P
    raise RuntimeError("no contracting instance found")


def test_ac04_padic_automorphism():
    t0 = time.perf_counter()
    rng = random.Random(4)
    bad, cases = 0, 0
    for n, r in itertools.product((1, 2, 3), (1, 2)):
        for rank in (1, 2):
            p = rng.choice([2, 3, 5])
            M0, P = _random_padic_module(rng, p, n, r, rank)
            rep = verify_automorphism(M0, P, 20, rng=rng)
            cases += 1
            bad += not (rep.ok and rep.max_residual_forward == 0 and rep.max_residual_backward == 0)
    assert report(4, bad == 0, "%d (n, r, rank) cases x 20 targets at p^8, weight 12, %d failed"
                  % (cases, bad), t0)


# -- 5. Koszul acyclicity ------------------------------------------------------------------------

def _h0_by_ranks(KM, S):
    """dim of the common kernel of the connection operators on I_S M."""
    B = ideal_basis(KM, S)
    stacked = la.vstack(*[op * B for op in KM.operators()], ncols=B.ncols())
    return B.ncols() - la.rank(stacked)


def test_ac05_koszul_acyclicity():
    t0 = time.perf_counter()
    rng = random.Random(5)
    bad = checks = 0
    for _ in range(50):
        KM = gen.random_koszul_module(rng, n=rng.randint(1, 3), n_log=None, rank=rng.randint(1, 2))
        logs = list(range(KM.alg.n_log))
        for k in range(1, len(logs) + 1):
            for S in itertools.combinations(logs, k):
                v = acyclicity_check(KM, list(S))
                checks += 1
                bad += not (v.acyclic and v.nilpotent_residues)
    ctl = gen.residue_minus_one_control()
    v = acyclicity_check(ctl, [0])
    h0 = _h0_by_ranks(ctl, [0])
    control_ok = (not v.acyclic) and v.homology[0] == h0 and h0 > 0
    ok = bad == 0 and control_ok
    assert report(5, ok, "50 modules, %d ideal checks, %d non-acyclic; control H^0 = %d (rank oracle %d)"
                  % (checks, bad, v.homology[0], h0), t0)


# -- 6. composed products and splittings --------------------------------------------------------

def test_ac06_composed_product_and_splitting():
    t0 = time.perf_counter()
    rng = random.Random(6)
    bad = 0
    for _ in range(100):
        P1 = M.random_poly(rng, rng.randint(1, 4))
        P2 = M.random_poly(rng, rng.randint(1, 4))
        if composed_product(P1, P2) != composed_product_resultant(P1, P2):
            bad += 1
        for variant in ("x2", "x1"):
            p1, p2 = bezout_split(P1, P2, variant)
            bad += not split_residual(P1, P2, p1, p2).is_zero()
    assert report(6, bad == 0, "100 pairs, deg <= 4, %d mismatches" % bad, t0)


# -- 7. Leibniz audits ----------------------------------------------------------------------------

def _flip(p1, q1, p2, q2):
    return -1 if (p1, p2) == (0, 1) else 1


def test_ac07_leibniz():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = flipped_caught = flipped_total = 0
    for k in range(200):
        if k % 2 == 0:
            fam = cech_cup(gen.random_cech_triple(rng))
        else:
            G1, G2, G3, m_an, m_dR, P1, P2, r1, r2 = M.random_pairing_setup(rng.randrange(10 ** 6))
            PD = PairingData(G1, G2, G3, m_an, m_dR, lam=1, split=bezout_split(P1, P2, "x2"))
            fam = SynCup(SynComplex(G1, P1, r1), SynComplex(G2, P2, r2), PD).family
        bad += not dbl_cup_leibniz_check(fam)
        if k % 10 == 0:
            flipped_total += 1
            flipped_caught += not dbl_cup_leibniz_check(fam.with_sign(_flip))
    ok = bad == 0 and flipped_caught > 0
    assert report(7, ok, "200 cup families, %d fail Leibniz; flipped control caught %d/%d"
                  % (bad, flipped_caught, flipped_total), t0)


# -- 8. splitting and lambda independence on E2 ----------------------------------------------------

def _e2_tables(seed):
    G1, G2, G3, m_an, m_dR, P1, P2, r1, r2 = M.random_pairing_setup(seed, max_deg=2, max_dim=2)
    S1, S2 = SynComplex(G1, P1, r1), SynComplex(G2, P2, r2)
    out = {}
    for variant in ("x2", "x1"):
        for lam in (0, 1):
            PD = PairingData(G1, G2, G3, m_an, m_dR, lam=lam, split=bezout_split(P1, P2, variant))
            out[(variant, lam)] = e2_pairing_matrices(SynCup(S1, S2, PD))
    return out


def test_ac08a_splitting_independence():
    t0 = time.perf_counter()
    bad = [s for s in range(25) if any(_e2_tables(s)[("x2", lam)] != _e2_tables(s)[("x1", lam)] for lam in (0, 1))]
    assert report(8, not bad, "(splittings) 25 setups, differing seeds %s" % bad, t0)


@pytest.mark.xfail(strict=True, reason="E2 products depend on lambda in general; see the decisions ledger")
def test_ac08b_lambda_independence():
    t0 = time.perf_counter()
    bad = []
    for s in range(25):
        tab = _e2_tables(s)
        if any(tab[(v, 0)] != tab[(v, 1)] for v in ("x2", "x1")):
            bad.append(s)
    assert report(8, not bad, "(lambda) 25 setups, differing seeds %s" % bad, t0)


# -- 9. trace and de Rham compatibility ----------------------------------------------------------

def _trace_setups(p):
    """(G1, G2, P1, r1, P2, r2) on point and Tate-style packages."""
    pt = M.point(p)
    t1, tm1 = M.tate(p, 1), M.tate(p, -1)
    # each choice kills Phi_2 on H^0 so that F^1 H^1(K1) x H^0(K2) is nonempty
    yield pt, pt, Poly([1, F(1, 5)]), 1, Poly([1, -1]), 0
    yield pt, pt, Poly([1, F(-2, 7)]), 1, Poly([1, -1]) * Poly([1, F(1, 2)]), 0
    yield tm1, t1, Poly([1, F(1, 5)]), 2, Poly([1, -p]), -1
    yield t1, tm1, Poly([1, F(1, 3)]), 0, Poly([1, F(-1, p)]), 1


def test_ac09_trace_and_de_rham():
    t0 = time.perf_counter()
    rng = random.Random(9)
    cases = bad = perturb_bad = 0
    for p in (3, 5):
        for G1, G2, P1, r1, P2, r2 in _trace_setups(p):
            G3, m_an, m_dR = tensor_packages(G1, G2)
            P3 = composed_product(P1, P2)
            cert = is_admissible(P3, r1 + r2, 0, 1, p=p)
            assert cert, "setup not admissible: %s" % cert.reason
            PD = PairingData(G1, G2, G3, m_an, m_dR, lam=1, split=bezout_split(P1, P2, "x2"))
            ctx = TraceContext(G3, la.mat([[1]]), P3, r1 + r2, cert, top=0)
            cup = SynCup(SynComplex(G1, P1, r1), SynComplex(G2, P2, r2), PD, ctx.S)
            for i in (0, 1):
                rep = r3bis_check(cup, ctx, i)
                cases += rep.syntomic.nrows() * rep.syntomic.ncols()
                bad += not rep.ok
            T = ctx.S.T
            H = T.cohomology(1)
            for _ in range(50):
                w = la.mat([[rng.randint(-9, 9)] for _ in range(T.dim(0))], T.dim(0), 1)
                if trace_map(ctx, H.reps + T.d(0) * w) != trace_map(ctx, H.reps):
                    perturb_bad += 1
    ok = bad == 0 and perturb_bad == 0 and cases > 0
    assert report(9, ok, "%d F1 x F0 entries, %d mismatches; %d boundary perturbations moved the trace"
                  % (cases, bad, perturb_bad), t0)


# -- 10. Gysin adjunction ---------------------------------------------------------------------------

def _admissible_pair(rng, B):
    p = B.G.p
    for _ in range(100):
        # P2(1) = 0 keeps H^0 of the point side nonzero, so the pairings are not vacuous
        P1, P2 = M.random_poly(rng, 2), Poly([1, -1]) * M.random_poly(rng, 1)
        P3 = composed_product(P1, P2)
        cX = is_admissible(P3, 2, 1, 1, p=p)
        cF = is_admissible(P3.scale_var(p), 1, 0, 1, p=p)
        if cX and cF:
            return P1, P2, cX, cF
    raise RuntimeError("no admissible pair")


def test_ac10_gysin_adjunction():
    t0 = time.perf_counter()
    rng = random.Random(10)
    bad_adj = bad_snake = compared = 0
    for seed in range(25):
        B = M.random_gysin_bundle(seed)
        P1, P2, cX, cF = _admissible_pair(rng, B)
        for i in range(0, 5):
            g = gysin(B, P1, 2, i, rng=rng)
            bad_snake += not (g.agrees and g.lift_independent)
        for i in range(2, 4):
            v = gysin_adjunction_check(B, P1, 2, P2, 0, i, bezout_split(P1, P2, "x2"), cX, cF, "first", rng=rng)
            compared += v.lhs.nrows() * v.lhs.ncols()
            bad_adj += not v
        for i in range(0, 2):
            v = gysin_adjunction_check(B, P2, 0, P1, 2, i, bezout_split(P2, P1, "x2"), cX, cF, "second", rng=rng)
            compared += v.lhs.nrows() * v.lhs.ncols()
            bad_adj += not v
    ok = bad_adj == 0 and bad_snake == 0 and compared >= 50
    assert report(10, ok, "25 bundles, %d scalar pairings compared, %d adjunction and %d snake failures"
                  % (compared, bad_adj, bad_snake), t0)


# -- 11. Hyodo-Kato sequence ----------------------------------------------------------------------

def test_ac11_hk_sequence():
    t0 = time.perf_counter()
    bad = checks = 0
    for seed in range(50):
        G = M.random_phi_N_package(seed)
        for i in range(min(G.C_an.degrees) - 1, max(G.C_an.degrees) + 2):
            h = hk_exact_sequence(G, i)
            checks += 1
            bad += not (h.exact and h.equivariant and h.abs_dim == h.coker_dim + h.ker_dim)
    assert report(11, bad == 0, "50 packages, %d degrees, %d failures" % (checks, bad), t0)


# -- 12. annihilator recipe ----------------------------------------------------------------------

def _semilinear_block(rng, K, alphas):
    """B diag(alphas) sigma(B)^{-1} with B unipotent; its f-th linearization has eigenvalues alpha^f."""
    n = len(alphas)
    el = (lambda: K([rng.randint(-1, 1) for _ in range(min(K.dim, 3))])) if K.f > 1 else \
        (lambda: K(rng.randint(-2, 2)))
    B = [[K(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            B[i][j] = el()
    Binv = [[K(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            Binv[i][j] = K(0) - B[i][j]  # unipotent 2 x 2 blocks at most
    sB = [[K.sigma(x) for x in row] for row in Binv]
    D = [[K(alphas[i]) if i == j else K(0) for j in range(n)] for i in range(n)]

    def mul(X, Y):
        return [[sum((X[i][k] * Y[k][j] for k in range(n)), K(0)) for j in range(n)] for i in range(n)]
    return mul(mul(B, D), sB)


def _phi_power(A, K, m):
    out = [[K(int(i == j)) for j in range(len(A))] for i in range(len(A))]
    for k in range(m):
        Ak = [[K.sigma(x, k) for x in row] for row in A]
        out = [[sum((out[i][l] * Ak[l][j] for l in range(len(A))), K(0)) for j in range(len(A))]
               for i in range(len(A))]
    return out


def test_ac12_annihilator():
    t0 = time.perf_counter()
    rng = random.Random(12)
    bad = adm_checked = adm_bad = 0
    for k in range(30):
        f = 1 + k % 3
        p = rng.choice([2, 3])
        K = BaseFieldK0(p, f)
        d = rng.randint(0, 1)
        blocks, alphas = [], []
        for _ in range(rng.randint(1, 2)):
            al = [F(rng.choice([1, -1, 2, 3, -3, 5])) * F(p) ** rng.randint(0, 2) for _ in range(rng.randint(1, 2))]
            alphas += al
            blocks.append(EigenData(_semilinear_block(rng, K, al), K))
        P = annihilator_poly(blocks, f)
        ok = P[0] == 1
        for b in blocks:
            # P is a polynomial in T^f, and Phi^{fj} is the j-th power of the linearization
            L = _phi_power(b.matrix, K, f)
            n = len(L)
            acc = [[K(0)] * n for _ in range(n)]
            powj = [[K(int(i == j)) for j in range(n)] for i in range(n)]
            for j in range(P.degree // f + 1):
                c = P[j * f]
                acc = [[acc[a][e] + K(c) * powj[a][e] for e in range(n)] for a in range(n)]
                powj = [[sum((powj[a][l] * L[l][e] for l in range(n)), K(0)) for e in range(n)] for a in range(n)]
            ok = ok and all(x == 0 for row in acc for x in row)
        bad += not ok
        excluded = {F(p) ** (d * f), F(p) ** ((d + 1) * f)}
        if all(a ** f not in excluded for a in alphas):
            adm_checked += 1
            adm_bad += not is_admissible(P, d + 1, d, f, p=p)
    ok = bad == 0 and adm_bad == 0
    assert report(12, ok, "30 block sets (f = 1, 2, 3): %d annihilation failures; %d avoid the excluded loci, "
                  "%d of those declined" % (bad, adm_checked, adm_bad), t0)
