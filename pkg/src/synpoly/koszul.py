"""Koszul complexes of commuting log-connection operators over truncated polynomial algebras.

The algebra is Q[x_1..x_n] modulo monomials of total degree > N. Every
variable carries the Euler derivation d_j = x_j d/dx_j, which preserves degree
and therefore acts on the truncation. A module is A^rank with operators
nabla_i = d_i + A_i, A_i a matrix of polynomials, so Leibniz holds by
construction and only flatness [nabla_i, nabla_j] = 0 has to be checked.

Truncated vectors are indexed (k, monomial) -> k * nmon + index(monomial).
"""
from dataclasses import dataclass
from itertools import combinations

from . import linalg as la
from .homcore import SES, ChainMap, Complex


class CommutationError(ValueError):
    pass


class StabilityError(ValueError):
    pass


def _monomials(n, N):
    out = []

    def rec(prefix, left, i):
        if i == n:
            out.append(tuple(prefix))
            return
        for a in range(left + 1):
            rec(prefix + [a], left - a, i + 1)
    rec([], N, 0)
    out.sort(key=lambda e: (sum(e), tuple(-a for a in e)))
    return out


def padd_dict(f, g, c=1):
    out = dict(f)
    for e, v in g.items():
        out[e] = out.get(e, 0) + c * v
        if out[e] == 0:
            del out[e]
    return out


def pmul_dict(f, g, N=None):
    out = {}
    for e1, a in f.items():
        for e2, b in g.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if N is not None and sum(e) > N:
                continue
            out[e] = out.get(e, 0) + a * b
    return {e: v for e, v in out.items() if v != 0}


@dataclass(frozen=True)
class LogAlgebra:
    n: int
    n_log: int
    N: int

    def __post_init__(self):
        if not 0 <= self.n_log <= self.n:
            raise ValueError("log variables must be among the first n")
        object.__setattr__(self, "mons", _monomials(self.n, self.N))
        object.__setattr__(self, "index", {e: i for i, e in enumerate(self.mons)})

    @property
    def dim(self):
        return len(self.mons)

    def var(self, i):
        e = [0] * self.n
        e[i] = 1
        return {tuple(e): la.q(1)}

    def const(self, c):
        return {(0,) * self.n: la.q(c)} if c else {}

    def euler(self, i):
        """Matrix of d_i = x_i d/dx_i on the truncation (diagonal)."""
        m = la.zeros(self.dim, self.dim)
        for j, e in enumerate(self.mons):
            if e[i]:
                m[j, j] = e[i]
        return m

    def derive(self, i, f):
        return {e: v * e[i] for e, v in f.items() if e[i]}

    def mult(self, f):
        """Matrix of multiplication by polynomial f on the truncation."""
        m = la.zeros(self.dim, self.dim)
        for j, e in enumerate(self.mons):
            for e2, v in f.items():
                t = tuple(a + b for a, b in zip(e, e2))
                k = self.index.get(t)
                if k is not None:
                    m[k, j] += la.q(v)
        return m

    def truncate(self, f):
        return {e: v for e, v in f.items() if sum(e) <= self.N and v != 0}

    def divisible_by_any(self, e, S):
        return any(e[i] > 0 for i in S)


@dataclass
class KoszulModule:
    alg: LogAlgebra
    rank: int
    A: list  # A[i][row][col]: polynomial dict; nabla_i(e_col) = d_i + sum_row A[i][row][col] e_row

    def __post_init__(self):
        if len(self.A) != self.alg.n:
            raise ValueError("need one connection matrix per variable")
        self._nab = {}

    @property
    def dim(self):
        return self.rank * self.alg.dim

    def nabla(self, i):
        if i not in self._nab:
            alg, r = self.alg, self.rank
            E = alg.euler(i)
            rows = []
            for a in range(r):
                row = []
                for b in range(r):
                    blk = alg.mult(self.A[i][a][b])
                    if a == b:
                        blk = blk + E
                    row.append(blk)
                rows.append(row)
            self._nab[i] = la.block(rows, [alg.dim] * r, [alg.dim] * r)
        return self._nab[i]

    def operators(self):
        return [self.nabla(i) for i in range(self.alg.n)]

    def check_commutation(self):
        ops = self.operators()
        for i, j in combinations(range(len(ops)), 2):
            if ops[i] * ops[j] != ops[j] * ops[i]:
                raise CommutationError("nabla_%d and nabla_%d do not commute" % (i + 1, j + 1))

    def basis_index(self, k, e):
        return k * self.alg.dim + self.alg.index[e]

    def apply_symbolic(self, i, vec):
        """nabla_i on a vector given as [poly dict per rank slot], by Leibniz (no matrices)."""
        alg = self.alg
        out = [alg.truncate(alg.derive(i, f)) for f in vec]
        for b, f in enumerate(vec):
            for a in range(self.rank):
                out[a] = padd_dict(out[a], pmul_dict(self.A[i][a][b], f, alg.N))
        return out


# -- Koszul complexes ---------------------------------------------------------

def _subsets(n, p):
    return list(combinations(range(n), p))


def koszul_of_operators(ops, dim):
    """K^p = sum over increasing p-tuples of dim-dimensional copies; signs (-1)^{#{i in I : i < k}}."""
    n = len(ops)
    for i, j in combinations(range(n), 2):
        if ops[i] * ops[j] != ops[j] * ops[i]:
            raise CommutationError("operators %d and %d do not commute" % (i + 1, j + 1))
    dims = {p: len(_subsets(n, p)) * dim for p in range(n + 1)}
    diffs = {}
    for p in range(n):
        src, tgt = _subsets(n, p), _subsets(n, p + 1)
        pos = {I: t for t, I in enumerate(tgt)}
        m = la.zeros(dims[p + 1], dims[p])
        for s, I in enumerate(src):
            for k in range(n):
                if k in I:
                    continue
                J = tuple(sorted(I + (k,)))
                eps = sum(1 for i in I if i < k)
                blk = ops[k] * (-1 if eps % 2 else 1)
                la.set_block(m, pos[J] * dim, s * dim, blk)
        diffs[p] = m
    return Complex(dims, diffs)


def koszul_complex(KM: KoszulModule):
    KM.check_commutation()
    return koszul_of_operators(KM.operators(), KM.dim)


def koszul_rebuild(KM: KoszulModule):
    """Rebuild K^* as M ⊗_A ∧^p(A^n) from symbolic Leibniz evaluation and wedge reordering."""
    alg, n, r = KM.alg, KM.alg.n, KM.rank
    dim = KM.dim
    dims = {p: len(_subsets(n, p)) * dim for p in range(n + 1)}
    diffs = {}
    for p in range(n):
        src, tgt = _subsets(n, p), _subsets(n, p + 1)
        pos = {I: t for t, I in enumerate(tgt)}
        m = la.zeros(dims[p + 1], dims[p])
        for s, I in enumerate(src):
            for b in range(r):
                for e in alg.mons:
                    vec = [{} for _ in range(r)]
                    vec[b] = {e: la.q(1)}
                    col = s * dim + KM.basis_index(b, e)
                    for k in range(n):
                        if k in I:
                            continue
                        # e_k ∧ e_I reordered to increasing order: sign of the permutation
                        word = (k,) + I
                        inv = sum(1 for x in range(len(word)) for y in range(x + 1, len(word))
                                  if word[x] > word[y])
                        sgn = -1 if inv % 2 else 1
                        J = tuple(sorted(word))
                        out = KM.apply_symbolic(k, vec)
                        for a, f in enumerate(out):
                            for e2, v in f.items():
                                m[pos[J] * dim + KM.basis_index(a, e2), col] += v * sgn
        diffs[p] = m
    return Complex(dims, diffs)


@dataclass
class ConeWitness:
    phi: dict
    ok: bool
    residual_degrees: list


def cone_identification(ops, dim):
    """K(ops) vs Cone(-op_n : K(ops[:-1]) -> K(ops[:-1]))[-1].

    The identification keeps the e_n-free part and multiplies the e_n part
    (a (q-1)-form wedge e_n, listed after the q-forms) by (-1)^{q-1}.
    """
    from .homcore import cone
    n = len(ops)
    if n < 2:
        raise ValueError("need at least two operators")
    K = koszul_of_operators(ops, dim)
    Kp = koszul_of_operators(ops[:-1], dim)
    f = ChainMap(Kp, Kp, {q: _blockdiag(-ops[-1], len(_subsets(n - 1, q))) for q in Kp.degrees})
    C = cone(f).shift(-1)
    phi, bad = {}, []
    for q in range(n + 1):
        full = _subsets(n, q)
        low = _subsets(n - 1, q)             # A^q = K'^q
        high = _subsets(n - 1, q - 1) if q else []   # B^{q-1} = K'^{q-1}
        m = la.zeros(C.dim(q), K.dim(q))
        pos = {I: t for t, I in enumerate(full)}
        for t, I in enumerate(low):
            la.set_block(m, t * dim, pos[I] * dim, la.eye(dim))
        s = -1 if (q - 1) % 2 else 1
        for t, J in enumerate(high):
            la.set_block(m, (len(low) + t) * dim, pos[J + (n - 1,)] * dim, la.eye(dim, s))
        phi[q] = m
    for q in range(n):
        if C.d(q) * phi[q] != phi[q + 1] * K.d(q):
            bad.append(q)
    for q in range(n + 1):
        if la.rank(phi[q]) != K.dim(q) or C.dim(q) != K.dim(q):
            bad.append(q)
    return ConeWitness(phi, not bad, bad)


def _blockdiag(b, k):
    r, c = la.shape(b)
    return la.block([[b if i == j else None for j in range(k)] for i in range(k)], [r] * k, [c] * k)


# -- submodules, ideals, residues ----------------------------------------------

def _restrict(op, B):
    """Matrix of op on span(B) (op(B) ⊆ span(B) required)."""
    if B.ncols() == 0:
        return la.zeros(0, 0)
    img = op * B
    if not la.contains(B, img):
        raise StabilityError("subspace is not stable under the operator")
    return la.Coordinates(B).of(img)


def _quotient(op, B):
    """Matrix of op on Q^n / span(B) in the complement basis."""
    n = op.nrows()
    C = la.complement(la.eye(n), B)
    if C.ncols() == 0:
        return la.zeros(0, 0), C
    full = la.hstack(B, C, nrows=n)
    c = la.Coordinates(full).of(op * C)
    return la.get_block(c, B.ncols(), n, 0, c.ncols()), C


def koszul_ses(ops, sub):
    """0 -> K(M') -> K(M) -> K(M/M') -> 0 for an operator-stable subspace M' = span(sub)."""
    dim = ops[0].nrows()
    sub = la.column_basis(sub) if sub.ncols() else sub
    ops1 = [_restrict(op, sub) for op in ops]
    quo = [_quotient(op, sub) for op in ops]
    ops3 = [m for m, _ in quo]
    C = quo[0][1] if quo else la.complement(la.eye(dim), sub)
    K1 = koszul_of_operators(ops1, sub.ncols()) if sub.ncols() else _zero_koszul(len(ops))
    K2 = koszul_of_operators(ops, dim)
    K3 = koszul_of_operators(ops3, C.ncols()) if C.ncols() else _zero_koszul(len(ops))
    n = len(ops)
    P = la.Coordinates(la.hstack(sub, C, nrows=dim))
    proj = la.get_block(P.of(la.eye(dim)), sub.ncols(), dim, 0, dim)
    inc, pr = {}, {}
    for q in range(n + 1):
        k = len(_subsets(n, q))
        inc[q] = _blockdiag(sub, k) if sub.ncols() else la.zeros(k * dim, 0)
        pr[q] = _blockdiag(proj, k) if C.ncols() else la.zeros(0, k * dim)
    return SES(K1, K2, K3, ChainMap(K1, K2, inc), ChainMap(K2, K3, pr))


def _zero_koszul(n):
    return Complex({q: 0 for q in range(n + 1)})


def ideal_basis(KM: KoszulModule, S):
    """Coordinate columns spanning I_S M in the truncation (monomials divisible by some x_i, i in S)."""
    S = list(S)
    if not S or any(not 0 <= i < KM.alg.n_log for i in S):
        raise ValueError("ideal selector must be a nonempty subset of the log variables")
    idx = [KM.basis_index(k, e) for k in range(KM.rank) for e in KM.alg.mons
           if KM.alg.divisible_by_any(e, S)]
    return la.columns(la.eye(KM.dim), sorted(idx))


def ideal_subcomplex(KM: KoszulModule, S):
    """(I_S K^*, inclusion chain map) as the Koszul complex of the restricted operators."""
    B = ideal_basis(KM, S)
    ops = KM.operators()
    sub_ops = [_restrict(op, B) for op in ops]
    Ksub = koszul_of_operators(sub_ops, B.ncols())
    K = koszul_complex(KM)
    n = KM.alg.n
    inc = ChainMap(Ksub, K, {q: _blockdiag(B, len(_subsets(n, q))) for q in range(n + 1)})
    return Ksub, inc


def residue(KM: KoszulModule, i):
    """A_i with x_i set to 0 (a matrix over A/x_i A), and whether it is nilpotent."""
    if not 0 <= i < KM.alg.n_log:
        raise ValueError("residues are defined for log variables only")
    R = [[{e: v for e, v in KM.A[i][a][b].items() if e[i] == 0} for b in range(KM.rank)]
         for a in range(KM.rank)]
    return R, _poly_matrix_nilpotent(R, KM.alg.N)


def _poly_matrix_nilpotent(R, N=None):
    # products are taken in the truncation, where the module lives
    r = len(R)
    P = R
    for _ in range(r - 1):
        P = [[_poly_sum(pmul_dict(P[a][c], R[c][b], N) for c in range(r)) for b in range(r)]
             for a in range(r)]
    return all(not P[a][b] for a in range(r) for b in range(r))


def _poly_sum(fs):
    out = {}
    for f in fs:
        out = padd_dict(out, f)
    return out


@dataclass
class AcyclicityVerdict:
    acyclic: bool
    homology: dict
    nilpotent_residues: bool
    truncation: int

    def __bool__(self):
        return self.acyclic


def acyclicity_check(KM: KoszulModule, S):
    K, _ = ideal_subcomplex(KM, S)
    h = {q: K.h(q) for q in K.degrees}
    nil = all(residue(KM, i)[1] for i in range(KM.alg.n_log))
    return AcyclicityVerdict(all(v == 0 for v in h.values()), h, nil, KM.alg.N)


# -- the one-variable inverse ----------------------------------------------------

@dataclass
class Step1Report:
    inverse_residual_zero: bool
    literal_N_nilpotent: bool
    series_length: int


def step1_inverse(KM: KoszulModule):
    """Invert nabla_1 on x_1 M at the truncation (n = n_log = 1).

    nabla = (D + A0)(1 + U) with D the Euler operator, A0 the constant part of A
    (nilpotent) and U = (D + A0)^{-1}(A - A0), which raises degree and is
    therefore nilpotent at the truncation; the inverse is (sum (-U)^k)(D + A0)^{-1}.
    Also reports whether the literal N = nabla - 1 is nilpotent there.
    """
    alg = KM.alg
    if alg.n != 1 or alg.n_log != 1:
        raise ValueError("the one-variable inverse needs n = n_log = 1")
    B = ideal_basis(KM, [0])
    nab = _restrict(KM.nabla(0), B)
    zero = (0,)
    A0 = [[{zero: KM.A[0][a][b][zero]} if zero in KM.A[0][a][b] else {}
           for b in range(KM.rank)] for a in range(KM.rank)]
    lead_full = KoszulModule(alg, KM.rank, [A0]).nabla(0)
    lead = _restrict(lead_full, B)
    lead_inv = la.inverse(lead)
    U = lead_inv * (nab - lead)
    k = B.ncols()
    acc, term, steps = la.eye(k), la.eye(k), 0
    while True:
        term = term * U * -1
        if la.is_zero(term):
            break
        acc = acc + term
        steps += 1
        if steps > alg.N + 1:
            raise ArithmeticError("degree-raising part failed to be nilpotent")
    inv = acc * lead_inv
    ok = inv * nab == la.eye(k) and nab * inv == la.eye(k)
    Nlit = nab - la.eye(k)
    P = Nlit
    for _ in range(k):
        P = P * Nlit
    return Step1Report(ok, la.is_zero(P), steps)
