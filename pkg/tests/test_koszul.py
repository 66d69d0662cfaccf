import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from synpoly import gen
from synpoly import linalg as la
from synpoly.koszul import (CommutationError, KoszulModule, LogAlgebra, acyclicity_check,
                            cone_identification, ideal_basis, ideal_subcomplex, koszul_complex,
                            koszul_rebuild, koszul_ses, residue, step1_inverse)

seeds = st.integers(0, 10 ** 6)


def trivial(n, n_log, N, rank=1):
    return KoszulModule(LogAlgebra(n, n_log, N), rank, [[[{} for _ in range(rank)] for _ in range(rank)]
                                                        for _ in range(n)])


def const(n, c):
    return {(0,) * n: la.q(c)} if c else {}


def test_one_variable_euler_operator():
    K = koszul_complex(trivial(1, 1, 4))
    # nabla(x^k) = k x^k on the basis 1, x, ..., x^4
    assert K.d(0) == la.mat([[k if i == k else 0 for k in range(5)] for i in range(5)])
    assert K.h(0) == 1 and K.h(1) == 1


def test_two_variable_signs():
    KM = trivial(2, 2, 1)
    K = koszul_complex(KM)
    n1, n2 = KM.nabla(0), KM.nabla(1)
    m = KM.dim
    assert K.d(0) == la.vstack(n1, n2, ncols=m)
    # from e_1 the new index 2 sits after 1 (one inversion), from e_2 index 1 goes in front
    assert K.d(1) == la.hstack(-n2, n1, nrows=m)


@given(seeds)
def test_d_squared_and_symbolic_rebuild(seed):
    KM = gen.random_koszul_module(random.Random(seed))
    K, R = koszul_complex(KM), koszul_rebuild(KM)
    for q in K.degrees:
        assert K.d(q) == R.d(q)
        assert la.is_zero(K.d(q + 1) * K.d(q))


def test_non_commuting_rejected():
    n = 2
    KM = KoszulModule(LogAlgebra(n, 2, 2), 2, [
        [[{}, const(n, 1)], [{}, {}]],
        [[{}, {}], [const(n, 1), {}]]])
    with pytest.raises(CommutationError):
        KM.check_commutation()


@pytest.mark.parametrize("n", [2, 3])
def test_cone_identification(n):
    KM = gen.random_koszul_module(random.Random(n), n=n, n_log=min(n, 2), rank=2, N=2)
    w = cone_identification(KM.operators(), KM.dim)
    assert w.ok, w.residual_degrees


def test_cone_splits_when_last_operator_vanishes():
    ops = [la.mat([[1, 1], [0, 1]]), la.zeros(2, 2)]
    from synpoly.koszul import koszul_of_operators
    K, K1 = koszul_of_operators(ops, 2), koszul_of_operators(ops[:1], 2)
    assert all(K.h(q) == K1.h(q) + K1.h(q - 1) for q in range(3))


def test_ideal_basis():
    KM = trivial(2, 2, 2)
    B = ideal_basis(KM, [0])
    assert B.ncols() == 3  # x1, x1^2, x1 x2
    assert ideal_basis(KM, [0, 1]).ncols() == KM.dim - 1
    with pytest.raises(ValueError):
        ideal_basis(KM, [])


@given(seeds)
def test_ideal_subcomplex_inclusion_is_chain_map(seed):
    KM = gen.random_koszul_module(random.Random(seed))
    Ks, inc = ideal_subcomplex(KM, [0])
    K = koszul_complex(KM)
    for q in K.degrees:
        assert K.d(q) * inc.at(q) == inc.at(q + 1) * Ks.d(q)


def test_residues():
    n = 1
    assert residue(trivial(1, 1, 2), 0)[1]
    up = KoszulModule(LogAlgebra(1, 1, 2), 2, [[[{}, const(n, 3)], [{}, {}]]])
    assert residue(up, 0)[1]
    idm = KoszulModule(LogAlgebra(1, 1, 2), 1, [[[const(n, 1)]]])
    assert not residue(idm, 0)[1]
    with pytest.raises(ValueError):
        residue(trivial(2, 1, 2), 1)


def test_x_dx_acyclic_on_ideal():
    v = acyclicity_check(trivial(1, 1, 5), [0])
    assert v.acyclic and set(v.homology.values()) == {0}


def test_residue_minus_one_has_flat_section():
    KM = gen.residue_minus_one_control(1, 1, 4)
    v = acyclicity_check(KM, [0])
    Ks, _ = ideal_subcomplex(KM, [0])
    # direct kernel: nabla(x) = x - x = 0
    assert la.nullspace(Ks.d(0)).ncols() == 1
    assert v.homology[0] == 1 and not v.acyclic


@given(seeds)
def test_nilpotent_residues_two_variables(seed):
    KM = gen.random_koszul_module(random.Random(seed), n=2, n_log=2, N=4)
    for k in (1, 2):
        for S in combinations(range(2), k):
            v = acyclicity_check(KM, S)
            assert v.nilpotent_residues and v.acyclic


def test_step1_inverse():
    KM = gen.random_koszul_module(random.Random(7), n=1, n_log=1, rank=2, N=6)
    rep = step1_inverse(KM)
    assert rep.inverse_residual_zero


def test_koszul_ses_long_exact():
    KM = gen.random_koszul_module(random.Random(9), n=2, n_log=2, rank=1, N=3)
    ses = koszul_ses(KM.operators(), ideal_basis(KM, [0]))
    assert ses.long_exact_ok()
