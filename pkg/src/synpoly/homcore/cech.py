"""Čech double complexes built from a cosimplicial family of DGAs.

For an ordered index set {0, ..., N-1} and every strictly increasing tuple
beta, ``CechSystem`` holds a DGA Omega_beta. K^{p,q} is the direct sum of
Omega_beta^q over tuples of length p+1 in lexicographic order, with

    (d1 s)_beta = sum_j (-1)^j rho(s_{beta(j)}),    d2 = d_beta componentwise,

where beta(j) drops the j-th entry and rho is the face restriction.
"""
from dataclasses import dataclass
from itertools import combinations

from .. import linalg as la
from .cups import CupFamily, _sign
from .double import DoubleComplex


@dataclass
class DGA:
    """dims[q]; d[q]: A^q -> A^{q+1}; mul[(a, b)]: A^{a+b} <- A^a ⊗ A^b (kron order)."""

    dims: dict
    d: dict
    mul: dict = None

    def dim(self, q):
        return self.dims.get(q, 0)

    def diff(self, q):
        m = self.d.get(q)
        return m if m is not None else la.zeros(self.dim(q + 1), self.dim(q))

    def product(self, a, b):
        m = (self.mul or {}).get((a, b))
        return m if m is not None else la.zeros(self.dim(a + b), self.dim(a) * self.dim(b))

    @property
    def degrees(self):
        return sorted(q for q, n in self.dims.items() if n)


class FaceError(ValueError):
    pass


class CechSystem:
    """algebras: {tuple: DGA}; restrictions: {(face, tuple): {q: matrix Omega_tuple^q <- Omega_face^q}}."""

    def __init__(self, n_index, algebras, restrictions, check=True):
        self.N = n_index
        self.alg = dict(algebras)
        self.res = dict(restrictions)
        self.tuples = {p: list(combinations(range(n_index), p + 1)) for p in range(n_index)}
        if check:
            self.check()

    @property
    def qs(self):
        return sorted({q for A in self.alg.values() for q in A.degrees})

    def rho(self, face, beta, q):
        if face == beta:
            return la.eye(self.alg[beta].dim(q))
        m = self.res.get((face, beta), {}).get(q)
        if m is None:
            return la.zeros(self.alg[beta].dim(q), self.alg[face].dim(q))
        return m

    def restrict(self, face, beta, q):
        """Restriction along any chain of codimension-one faces (they must agree)."""
        if face == beta:
            return la.eye(self.alg[beta].dim(q))
        drop = [b for b in beta if b not in face]
        mid = tuple(b for b in beta if b != drop[0])
        return self.rho(mid, beta, q) * self.restrict(face, mid, q)

    def check(self):
        for p in range(1, self.N):
            for beta in self.tuples[p]:
                A = self.alg[beta]
                for j in range(len(beta)):
                    face = beta[:j] + beta[j + 1:]
                    F = self.alg[face]
                    for q in self.qs:
                        r = self.rho(face, beta, q)
                        if la.shape(r) != (A.dim(q), F.dim(q)):
                            raise FaceError("restriction %s -> %s has wrong shape in degree %d" % (face, beta, q))
                        if A.diff(q) * r != self.rho(face, beta, q + 1) * F.diff(q):
                            raise FaceError("restriction %s -> %s is not a chain map (degree %d)" % (face, beta, q))
                        for a in self.qs:
                            b = q - a
                            if F.mul is None:
                                continue
                            lhs = r * F.product(a, b)
                            rhs = A.product(a, b) * la.kron(self.rho(face, beta, a), self.rho(face, beta, b))
                            if lhs != rhs:
                                raise FaceError("restriction %s -> %s breaks products (%d,%d)" % (face, beta, a, b))
                # cosimplicial identity: both paths to codimension-2 faces agree
                if len(beta) >= 3:
                    for i, k in combinations(range(len(beta)), 2):
                        face2 = tuple(b for t, b in enumerate(beta) if t not in (i, k))
                        m1 = tuple(b for t, b in enumerate(beta) if t != i)
                        m2 = tuple(b for t, b in enumerate(beta) if t != k)
                        for q in self.qs:
                            if self.rho(m1, beta, q) * self.rho(face2, m1, q) != \
                                    self.rho(m2, beta, q) * self.rho(face2, m2, q):
                                raise FaceError("face identity fails at %s" % (beta,))

    def offsets(self, p, q):
        off, o = {}, 0
        for beta in self.tuples.get(p, []):
            off[beta] = o
            o += self.alg[beta].dim(q)
        return off, o


def cech_double(S: CechSystem):
    dims, d1, d2 = {}, {}, {}
    for p in range(S.N):
        for q in S.qs:
            dims[(p, q)] = S.offsets(p, q)[1]
    for p in range(S.N):
        for q in S.qs:
            off, n = S.offsets(p, q)
            offq, nq = S.offsets(p, q + 1)
            m2 = la.zeros(nq, n)
            for beta in S.tuples[p]:
                A = S.alg[beta]
                if A.dim(q) and A.dim(q + 1):
                    la.set_block(m2, offq[beta], off[beta], A.diff(q))
            d2[(p, q)] = m2
            if p + 1 < S.N:
                offp, np_ = S.offsets(p + 1, q)
                m1 = la.zeros(np_, n)
                for beta in S.tuples[p + 1]:
                    for j in range(len(beta)):
                        face = beta[:j] + beta[j + 1:]
                        r = S.rho(face, beta, q) * _sign(j)
                        if r.nrows() and r.ncols():
                            blk = la.get_block(m1, offp[beta], offp[beta] + r.nrows(),
                                               off[face], off[face] + r.ncols())
                            la.set_block(m1, offp[beta], off[face], blk + r)
                d1[(p, q)] = m1
    return DoubleComplex(dims, d1, d2)


class CechTriple:
    """Systems S1, S2, S3 on one index set with products Omega1_beta ⊗ Omega2_beta -> Omega3_beta."""

    def __init__(self, S1, S2, S3, products):
        """products: {beta: {(a, b): matrix Omega3^{a+b} <- Omega1^a ⊗ Omega2^b}}."""
        self.S = (S1, S2, S3)
        self.prod = products
        self.K = tuple(cech_double(S) for S in self.S)

    def beta_product(self, beta, a, b):
        S1, S2, S3 = self.S
        m = self.prod.get(beta, {}).get((a, b))
        if m is None:
            return la.zeros(S3.alg[beta].dim(a + b), S1.alg[beta].dim(a) * S2.alg[beta].dim(b))
        return m

    def check(self):
        """Index-wise Leibniz and compatibility with restrictions."""
        S1, S2, S3 = self.S
        for p in range(S1.N):
            for beta in S1.tuples[p]:
                A1, A2, A3 = S1.alg[beta], S2.alg[beta], S3.alg[beta]
                for a in S1.qs:
                    for b in S2.qs:
                        M = self.beta_product(beta, a, b)
                        lhs = A3.diff(a + b) * M
                        rhs = (self.beta_product(beta, a + 1, b) * la.kron(A1.diff(a), la.eye(A2.dim(b)))
                               + self.beta_product(beta, a, b + 1) * la.kron(la.eye(A1.dim(a)), A2.diff(b)) * _sign(a))
                        if lhs != rhs:
                            raise FaceError("index-wise Leibniz fails at %s (%d,%d)" % (beta, a, b))
                        for j in range(len(beta)) if p else []:
                            face = beta[:j] + beta[j + 1:]
                            l2 = S3.rho(face, beta, a + b) * self.beta_product(face, a, b)
                            r2 = M * la.kron(S1.rho(face, beta, a), S2.rho(face, beta, b))
                            if l2 != r2:
                                raise FaceError("product does not commute with restriction %s -> %s" % (face, beta))
        return True


def cech_cup(T: CechTriple, literal=False):
    """Cup family of the Čech double complexes.

    Default: the Alexander-Whitney product (s ∪ t)_beta = rho(s_{front}) · rho(t_{back}),
    which satisfies both Leibniz rules of a double-complex cup family.
    ``literal=True`` evaluates the signed sum over the split point r, whose only
    well-typed term is r = p1; it equals the total cup ∪~.
    """
    S1, S2, S3 = T.S

    def rule(p1, q1, p2, q2):
        p = p1 + p2
        if p >= S3.N:
            return None
        off1, n1 = S1.offsets(p1, q1)
        off2, n2 = S2.offsets(p2, q2)
        off3, n3 = S3.offsets(p, q1 + q2)
        out = la.zeros(n3, n1 * n2)
        if literal:
            e = (p + p1) * (p1 + q1) + p1 * p + p1
            sgn = _sign(e)
        else:
            sgn = 1
        for beta in S3.tuples[p]:
            front, back = beta[:p1 + 1], beta[p1:]
            R1 = S1.restrict(front, beta, q1)
            R2 = S2.restrict(back, beta, q2)
            M = T.beta_product(beta, q1, q2) * la.kron(R1, R2)
            if not (M.nrows() and M.ncols()):
                continue
            b1, b2 = S1.alg[front].dim(q1), S2.alg[back].dim(q2)
            for i in range(b1):
                for j in range(b2):
                    src = i * b2 + j
                    dst = (off1[front] + i) * n2 + (off2[back] + j)
                    for k in range(M.nrows()):
                        v = M[k, src]
                        if v:
                            out[off3[beta] + k, dst] += v * sgn
        return out

    return CupFamily(*T.K, rule=rule)
