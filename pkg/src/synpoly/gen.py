"""Random small instances for property tests and acceptance runs.

Every generator takes a ``random.Random`` and returns exact data; nothing here
is used by the engines themselves.
"""
import random

from . import linalg as la
from .homcore import DGA, ChainMap, CechSystem, CechTriple, Complex, DoubleComplex


def rmat(rng, m, n, lo=-3, hi=3, density=1.0):
    return la.mat([[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(n)]
                   for _ in range(m)], m, n)


def rng_of(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


# -- complexes -------------------------------------------------------------

def random_complex(rng, lo=0, hi=2, max_dim=3, min_dim=0):
    """d^{q+1} = R * L with L the left annihilator of im d^q, so d^2 = 0 exactly."""
    dims = {q: rng.randint(min_dim, max_dim) for q in range(lo, hi + 1)}
    diffs = {}
    prev = la.zeros(dims[lo], 0)
    for q in range(lo, hi):
        L = la.left_nullspace(prev) if prev.nrows() else la.zeros(0, 0)
        if L.nrows() == 0:
            L = la.zeros(0, dims[q])
        R = rmat(rng, dims[q + 1], L.nrows())
        d = R * L if L.nrows() else la.zeros(dims[q + 1], dims[q])
        diffs[q] = d
        prev = d
    return Complex(dims, diffs)


def _vec_constraints(blocks, nvars):
    return la.vstack(*blocks, ncols=nvars) if blocks else la.zeros(0, nvars)


def chain_map_space(S, T, degree=0, extra=None):
    """Basis of all degree-k chain maps S -> T (as flattened vectors) and the unpacker."""
    qs = [q for q in S.degrees if S.dim(q) and T.dim(q + degree)]
    layout, n = {}, 0
    for q in qs:
        layout[q] = (n, T.dim(q + degree), S.dim(q))
        n += T.dim(q + degree) * S.dim(q)
    s = -1 if degree % 2 else 1
    rows = []
    for q in set(S.degrees) | {q - 1 for q in S.degrees}:
        # d_T f^q - s f^{q+1} d_S = 0 as a map S^q -> T^{q+k+1}
        m, k = T.dim(q + degree + 1), S.dim(q)
        if not (m and k):
            continue
        blk = la.zeros(m * k, n)
        if q in layout:
            o, a, b = layout[q]
            la.set_block(blk, 0, o, la.kron(T.d(q + degree), la.eye(b)))
        if q + 1 in layout:
            o, a, b = layout[q + 1]
            la.set_block(blk, 0, o, la.get_block(blk, 0, m * k, o, o + a * b)
                         - la.kron(la.eye(a), S.d(q).transpose()) * s)
        rows.append(blk)
    for e in extra or []:
        rows.append(e(layout, n))
    N = la.nullspace(_vec_constraints(rows, n))

    def unpack(v):
        mats = {}
        for q, (o, a, b) in layout.items():
            mats[q] = la.mat([[v[o + i * b + j, 0] for j in range(b)] for i in range(a)], a, b)
        return mats

    return N, unpack, layout


def random_chain_map(rng, S, T, degree=0, extra=None):
    N, unpack, _ = chain_map_space(S, T, degree, extra)
    v = N * rmat(rng, N.ncols(), 1) if N.ncols() else la.zeros(N.nrows(), 1)
    return ChainMap(S, T, unpack(v), degree)


def random_double_complex(rng, ncols=3, qlo=0, qhi=2, max_dim=3):
    """Columns are random complexes; d1 = chain maps f_p with f_{p+1} f_p = 0."""
    cols = [random_complex(rng, qlo, qhi, max_dim) for _ in range(ncols)]
    maps = []
    for p in range(ncols - 1):
        S, T = cols[p], cols[p + 1]
        extra = []
        if maps:
            prev = maps[-1]

            def comp(layout, n, prev=prev, S=S, T=T):
                blocks = []
                for q, (o, a, b) in layout.items():
                    F = prev.at(q)
                    if F.ncols() == 0:
                        continue
                    blk = la.zeros(a * F.ncols(), n)
                    la.set_block(blk, 0, o, la.kron(la.eye(a), F.transpose()))
                    blocks.append(blk)
                return la.vstack(*blocks, ncols=n) if blocks else la.zeros(0, n)
            extra.append(comp)
        maps.append(random_chain_map(rng, S, T, 0, extra))
    dims = {(p, q): cols[p].dim(q) for p in range(ncols) for q in range(qlo, qhi + 1)}
    d2 = {(p, q): cols[p].d(q) for p in range(ncols) for q in range(qlo, qhi + 1)}
    d1 = {(p, q): maps[p].at(q) for p in range(ncols - 1) for q in range(qlo, qhi + 1)}
    return DoubleComplex(dims, d1, d2)


def tensor_double(A: Complex, B: Complex):
    """K^{p,q} = A^p ⊗ B^q with d1 = dA ⊗ 1, d2 = 1 ⊗ dB."""
    dims, d1, d2 = {}, {}, {}
    for p in A.degrees:
        for q in B.degrees:
            dims[(p, q)] = A.dim(p) * B.dim(q)
    for p in A.degrees:
        for q in B.degrees:
            d1[(p, q)] = la.kron(A.d(p), la.eye(B.dim(q)))
            d2[(p, q)] = la.kron(la.eye(A.dim(p)), B.d(q))
    return DoubleComplex(dims, d1, d2)


# -- Čech systems --------------------------------------------------------------
#
# Omega_beta is the weight-truncated polynomial de Rham algebra in one variable
# t: basis t^k (degree 0, weight k) and t^k dt (degree 1, weight k+1), modulo
# weight >= N_beta. Restrictions rescale t by s_beta / s_face and project, so
# paths through different faces agree.

def _weights(N, q):
    return {0: list(range(N)), 1: list(range(1, N))}.get(q, [])


def poly_dga(N):
    dims = {0: N, 1: max(N - 1, 0)}
    d = la.zeros(dims[1], dims[0])
    for k in range(1, N):
        d[k - 1, k] = k
    mul = {}
    for a in (0, 1):
        for b in (0, 1):
            if a + b > 1:
                continue
            mul[(a, b)] = truncated_product(N, N, N, a, b)
    return DGA(dims, {0: d}, mul)


def truncated_product(N1, N2, N3, a, b):
    """Omega[N3]^{a+b} <- Omega[N1]^a ⊗ Omega[N2]^b: multiply then drop weight >= N3."""
    w1, w2, w3 = _weights(N1, a), _weights(N2, b), _weights(N3, a + b)
    out = la.zeros(len(w3), len(w1) * len(w2))
    if a + b > 1:
        return out
    pos = {w: i for i, w in enumerate(w3)}
    for i, x in enumerate(w1):
        for j, y in enumerate(w2):
            if x + y in pos:
                out[pos[x + y], i * len(w2) + j] = 1
    return out


def _rescale(N_from, N_to, c, q):
    wf, wt = _weights(N_from, q), _weights(N_to, q)
    out = la.zeros(len(wt), len(wf))
    pos = {w: i for i, w in enumerate(wt)}
    for i, w in enumerate(wf):
        if w in pos:
            out[pos[w], i] = la.q(c) ** w
    return out


def _cech_levels(rng, n_index, max_N):
    from itertools import combinations
    lv, scale = {}, {}
    for p in range(n_index):
        for beta in combinations(range(n_index), p + 1):
            cap = min(lv[beta[:j] + beta[j + 1:]] for j in range(len(beta))) if p else max_N
            lv[beta] = rng.randint(1, cap)
            scale[beta] = la.q(rng.choice([1, 2, -1, 3, "1/2"]))
    return lv, scale


def random_cech_system(rng, n_index=3, max_N=3, levels=None):
    lv, scale = levels or _cech_levels(rng, n_index, max_N)
    alg = {beta: poly_dga(N) for beta, N in lv.items()}
    res = {}
    for beta in lv:
        if len(beta) < 2:
            continue
        for j in range(len(beta)):
            face = beta[:j] + beta[j + 1:]
            c = scale[beta] / scale[face]
            res[(face, beta)] = {q: _rescale(lv[face], lv[beta], c, q) for q in (0, 1)}
    return CechSystem(n_index, alg, res)


def random_cech_triple(rng, n_index=3, max_N=3):
    lv1, scale = _cech_levels(rng, n_index, max_N)
    lv2 = dict(lv1)
    lv3 = {}
    for beta in lv1:
        # products land in a level no larger than either factor, monotone along faces
        faces = [lv3[beta[:j] + beta[j + 1:]] for j in range(len(beta))] if len(beta) > 1 else []
        lv3[beta] = rng.randint(1, min([lv1[beta]] + faces))
    S1 = random_cech_system(rng, n_index, levels=(lv1, scale))
    S2 = random_cech_system(rng, n_index, levels=(lv2, scale))
    S3 = random_cech_system(rng, n_index, levels=(lv3, scale))
    prods = {beta: {(a, b): truncated_product(lv1[beta], lv2[beta], lv3[beta], a, b)
                    for a in (0, 1) for b in (0, 1)} for beta in lv1}
    T = CechTriple(S1, S2, S3, prods)
    T.check()
    return T


# -- Koszul modules --------------------------------------------------------------
#
# Commuting connections come from a gauge transform of constant commuting
# matrices: A_i = g^{-1} d_i(g) + g^{-1} C_i g with g = 1 + (terms of positive
# degree). Conjugation by g is an automorphism of each truncation, so the
# operators commute exactly, and x_i | d_i(g) makes the residue along a log
# variable conjugate to C_i mod x_i.

def _pmat_mul(F, G, N):
    from .koszul import padd_dict, pmul_dict
    r = len(F)
    out = [[{} for _ in range(r)] for _ in range(r)]
    for a in range(r):
        for b in range(r):
            for c in range(r):
                out[a][b] = padd_dict(out[a][b], pmul_dict(F[a][c], G[c][b], N))
    return out


def _pmat_add(F, G, c=1):
    from .koszul import padd_dict
    return [[padd_dict(f, g, c) for f, g in zip(fr, gr)] for fr, gr in zip(F, G)]


def _pmat_inverse_unipotent(g, N):
    """(1 + h)^{-1} = sum (-h)^k, finite because h has no constant term."""
    r = len(g)
    one = [[{(0,) * _nvars(g): la.q(1)} if a == b else {} for b in range(r)] for a in range(r)]
    h = _pmat_add(g, one, -1)
    acc, term = one, one
    for _ in range(N):
        term = _pmat_mul(term, h, N)
        term = [[{e: -v for e, v in f.items()} for f in row] for row in term]
        acc = _pmat_add(acc, term)
    return acc


def _nvars(g):
    for row in g:
        for f in row:
            for e in f:
                return len(e)
    raise ValueError("need at least one monomial to read the variable count")


def random_koszul_module(rng, n=None, n_log=None, rank=None, N=None, nilpotent=True):
    from .koszul import KoszulModule, LogAlgebra, _monomials
    n = n if n is not None else rng.randint(1, 3)
    n_log = n_log if n_log is not None else rng.randint(1, min(n, 2))
    rank = rank if rank is not None else rng.randint(1, 2)
    N = N if N is not None else rng.randint(1, 6 if n == 1 else (4 if n == 2 else 3))
    alg = LogAlgebra(n, n_log, N)
    zero = (0,) * n
    mons = [e for e in _monomials(n, N) if 0 < sum(e) <= min(N, 2)]
    g = [[{zero: la.q(1)} if a == b else {} for b in range(rank)] for a in range(rank)]
    for a in range(rank):
        for b in range(rank):
            for e in mons:
                if rng.random() < 0.4:
                    g[a][b][e] = la.q(rng.randint(-2, 2))
            g[a][b] = {e: v for e, v in g[a][b].items() if v != 0}
    gi = _pmat_inverse_unipotent(g, N)
    # constant commuting matrices: multiples of one strictly upper-triangular matrix
    # (nilpotent), plus scalars on non-log variables when allowed
    A = []
    for i in range(n):
        C = [[{} for _ in range(rank)] for _ in range(rank)]
        if rank == 2:
            c = rng.randint(-2, 2)
            if c:
                C[0][1] = {zero: la.q(c)}
        if i >= n_log or not nilpotent:
            s = rng.randint(-2, 2) if i >= n_log else -1
            if s:
                for a in range(rank):
                    C[a][a] = {zero: la.q(s)} if not C[a][a] else C[a][a]
        dg = [[alg.derive(i, f) for f in row] for row in g]
        A.append(_pmat_add(_pmat_mul(gi, dg, N), _pmat_mul(_pmat_mul(gi, C, N), g, N)))
    return KoszulModule(alg, rank, A)


def residue_minus_one_control(n=1, n_log=1, N=3):
    """Rank-1 connection with residue -1 along x_1 and 0 elsewhere: x_1 is flat."""
    from .koszul import KoszulModule, LogAlgebra
    alg = LogAlgebra(n, n_log, N)
    zero = (0,) * n
    A = [[[{zero: la.q(-1)} if i == 0 else {}]] for i in range(n)]
    return KoszulModule(alg, 1, A)
