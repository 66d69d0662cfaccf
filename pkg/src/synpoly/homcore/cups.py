"""Cup products of double complexes.

A cup family assigns to every pair of bidegrees a matrix

    K3^{p1+p2, q1+q2}  <-  K1^{p1,q1} ⊗ K2^{p2,q2}

with tensor coordinates ordered as ``la.kron(x, y)``, i.e. index i*dim2 + j.
Leibniz rules of a family:

    d1(x ∪ y) = d1 x ∪ y + (-1)^{p1} x ∪ d1 y
    d2(x ∪ y) = d2 x ∪ y + (-1)^{q1} x ∪ d2 y

The total cup is x ∪~ y = (-1)^{q1 p2} x ∪ y, which satisfies Leibniz for
the total differential d1 + (-1)^p d2.
"""
from dataclasses import dataclass, field

from .. import linalg as la
from .complexes import ChainMap, Complex
from .double import DoubleComplex
from .specseq import SpectralSequence


def _sign(e):
    return -1 if e % 2 else 1


class CupFamily:
    def __init__(self, K1: DoubleComplex, K2: DoubleComplex, K3: DoubleComplex, blocks=None, rule=None):
        """Either a dict {(p1,q1,p2,q2): matrix} or a callable rule(p1,q1,p2,q2) -> matrix/None."""
        self.K1, self.K2, self.K3 = K1, K2, K3
        self._blocks = dict(blocks or {})
        self._rule = rule
        self._cache = {}

    def block(self, p1, q1, p2, q2):
        key = (p1, q1, p2, q2)
        if key not in self._cache:
            m = self._blocks.get(key)
            if m is None and self._rule is not None:
                m = self._rule(p1, q1, p2, q2)
            want = (self.K3.dim(p1 + p2, q1 + q2), self.K1.dim(p1, q1) * self.K2.dim(p2, q2))
            if m is None:
                m = la.zeros(*want)
            elif la.shape(m) != want:
                raise ValueError("cup block %s has shape %s, expected %s" % (key, la.shape(m), want))
            self._cache[key] = m
        return self._cache[key]

    def apply(self, p1, q1, x, p2, q2, y):
        return self.block(p1, q1, p2, q2) * la.kron(x, y)

    def scaled(self, c):
        return CupFamily(self.K1, self.K2, self.K3,
                         rule=lambda *k: self.block(*k) * c)

    def with_sign(self, sign_fn):
        """Family with block multiplied by sign_fn(p1,q1,p2,q2) (for negative controls)."""
        return CupFamily(self.K1, self.K2, self.K3,
                         rule=lambda *k: self.block(*k) * sign_fn(*k))

    def bidegree_pairs(self):
        for (p1, q1) in self.K1.bidegrees:
            for (p2, q2) in self.K2.bidegrees:
                yield p1, q1, p2, q2


@dataclass
class LeibnizReport:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def dbl_cup_leibniz_check(cup: CupFamily):
    """Evaluate both Leibniz identities on basis tensors; list offending bidegrees."""
    K1, K2, K3 = cup.K1, cup.K2, cup.K3
    fails = []
    for p1, q1, p2, q2 in cup.bidegree_pairs():
        n1, n2 = K1.dim(p1, q1), K2.dim(p2, q2)
        I1, I2 = la.eye(n1), la.eye(n2)
        C = cup.block(p1, q1, p2, q2)
        r1 = (K3.d1(p1 + p2, q1 + q2) * C
              - cup.block(p1 + 1, q1, p2, q2) * la.kron(K1.d1(p1, q1), I2)
              - cup.block(p1, q1, p2 + 1, q2) * la.kron(I1, K2.d1(p2, q2)) * _sign(p1))
        r2 = (K3.d2(p1 + p2, q1 + q2) * C
              - cup.block(p1, q1 + 1, p2, q2) * la.kron(K1.d2(p1, q1), I2)
              - cup.block(p1, q1, p2, q2 + 1) * la.kron(I1, K2.d2(p2, q2)) * _sign(q1))
        if not la.is_zero(r1):
            fails.append(("d1", (p1, q1), (p2, q2)))
        if not la.is_zero(r2):
            fails.append(("d2", (p1, q1), (p2, q2)))
    return LeibnizReport(not fails, fails)


def tensor_total(T1: Complex, T2: Complex):
    """(T1 ⊗ T2)^n = sum T1^a ⊗ T2^b, d = d ⊗ 1 + (-1)^a 1 ⊗ d. Returns (complex, offsets)."""
    degs1, degs2 = list(T1.degrees), list(T2.degrees)
    if not degs1 or not degs2:
        return Complex({}), {}
    lo, hi = degs1[0] + degs2[0], degs1[-1] + degs2[-1]
    off, dims = {}, {}
    for n in range(lo, hi + 1):
        o = 0
        for a in degs1:
            off[(a, n - a)] = o
            o += T1.dim(a) * T2.dim(n - a)
        dims[n] = o
    diffs = {}
    for n in range(lo, hi + 1):
        m = la.zeros(dims.get(n + 1, 0), dims[n])
        for a in degs1:
            b = n - a
            if not (T1.dim(a) and T2.dim(b)):
                continue
            c = off[(a, b)]
            if T1.dim(a + 1):
                la.set_block(m, off[(a + 1, b)], c, la.kron(T1.d(a), la.eye(T2.dim(b))))
            if T2.dim(b + 1):
                la.set_block(m, off[(a, b + 1)], c, la.kron(la.eye(T1.dim(a)), T2.d(b)) * _sign(a))
        diffs[n] = m
    return Complex(dims, diffs), off


class TotalCup:
    """The total cup ∪~ on Tot(K1) ⊗ Tot(K2) -> Tot(K3)."""

    def __init__(self, cup: CupFamily, signed=True):
        self.cup = cup
        self.signed = signed
        self.T1, self.T2, self.T3 = cup.K1.total(), cup.K2.total(), cup.K3.total()
        self._m = {}

    def matrix(self, n1, n2):
        """Tot3^{n1+n2} <- Tot1^{n1} ⊗ Tot2^{n2} in kron coordinates."""
        key = (n1, n2)
        if key not in self._m:
            T1, T2, T3 = self.T1, self.T2, self.T3
            d1, d2 = T1.dim(n1), T2.dim(n2)
            out = la.zeros(T3.dim(n1 + n2), d1 * d2)
            if d1 and d2 and T3.dim(n1 + n2):
                for p1 in T1.ps:
                    q1 = n1 - p1
                    a = self.cup.K1.dim(p1, q1)
                    if not a:
                        continue
                    for p2 in T2.ps:
                        q2 = n2 - p2
                        b = self.cup.K2.dim(p2, q2)
                        if not b or not self.cup.K3.dim(p1 + p2, q1 + q2):
                            continue
                        C = self.cup.block(p1, q1, p2, q2)
                        if self.signed:
                            C = C * _sign(q1 * p2)
                        r0 = T3.offset(p1 + p2, q1 + q2)
                        o1, o2 = T1.offset(p1, q1), T2.offset(p2, q2)
                        for i in range(a):
                            for j in range(b):
                                colv = (o1 + i) * d2 + (o2 + j)
                                src = i * b + j
                                for k in range(C.nrows()):
                                    v = C[k, src]
                                    if v:
                                        out[r0 + k, colv] = v
            self._m[key] = out
        return self._m[key]

    def apply(self, n1, x, n2, y):
        return self.matrix(n1, n2) * la.kron(x, y)

    def as_chain_map(self, check=True):
        """The cup as a degree-0 chain map (T1 ⊗ T2) -> T3."""
        TT, off = tensor_total(self.T1, self.T2)
        mats = {}
        for n in TT.degrees:
            m = la.zeros(self.T3.dim(n), TT.dim(n))
            for a in self.T1.degrees:
                b = n - a
                if self.T1.dim(a) and self.T2.dim(b):
                    la.set_block(m, 0, off[(a, b)], self.matrix(a, b))
            mats[n] = m
        return ChainMap(TT, self.T3, mats, check=check)

    def leibniz_ok(self):
        try:
            self.as_chain_map(check=True)
        except ValueError:
            return False
        return True

    def on_cohomology(self, n1, n2):
        """Matrix H^{n1+n2}(T3) <- H^{n1}(T1) ⊗ H^{n2}(T2) in representative bases."""
        H1, H2, H3 = self.T1.cohomology(n1), self.T2.cohomology(n2), self.T3.cohomology(n1 + n2)
        if H1.dim == 0 or H2.dim == 0:
            return la.zeros(H3.dim, H1.dim * H2.dim)
        return H3.class_of(self.matrix(n1, n2) * la.kron(H1.reps, H2.reps))

    def representative_independent(self, n1, n2, rng, trials=3):
        """Perturb representatives by random coboundaries; the class of the product must not move."""
        H1, H2, H3 = self.T1.cohomology(n1), self.T2.cohomology(n2), self.T3.cohomology(n1 + n2)
        if H1.dim == 0 or H2.dim == 0:
            return True
        base = self.on_cohomology(n1, n2)
        for _ in range(trials):
            x = H1.reps + self.T1.d(n1 - 1) * _rand(self.T1.dim(n1 - 1), H1.dim, rng)
            y = H2.reps + self.T2.d(n2 - 1) * _rand(self.T2.dim(n2 - 1), H2.dim, rng)
            if H3.class_of(self.matrix(n1, n2) * la.kron(x, y)) != base:
                return False
        return True


def _rand(m, n, rng, lo=-3, hi=3):
    return la.mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)], m, n)


def filtration_preserved(tc: TotalCup, n1, n2):
    """F^{a} H^{n1} ∪ F^{b} H^{n2} ⊆ F^{a+b} H^{n1+n2} for every a, b."""
    S1, S2, S3 = (SpectralSequence(K) for K in (tc.cup.K1, tc.cup.K2, tc.cup.K3))
    P1 = tc.T1.ps + [tc.T1.ps[-1] + 1] if tc.T1.ps else []
    P2 = tc.T2.ps + [tc.T2.ps[-1] + 1] if tc.T2.ps else []
    for a in P1:
        A = S1.F_H(a, n1)
        for b in P2:
            B = S2.F_H(b, n2)
            if A.ncols() == 0 or B.ncols() == 0:
                continue
            prod = tc.matrix(n1, n2) * la.kron(A, B)
            if not la.contains(S3.F_H(a + b, n1 + n2), prod):
                return False
    return True


class PageProducts:
    """∪_r on E_r computed on total-complex representatives of the pages."""

    def __init__(self, tc: TotalCup):
        self.tc = tc
        self.S = [SpectralSequence(K) for K in (tc.cup.K1, tc.cup.K2, tc.cup.K3)]

    def matrix(self, r, p1, q1, p2, q2):
        S1, S2, S3 = self.S
        E1, E2 = S1.page(r, p1, q1), S2.page(r, p2, q2)
        E3 = S3.page(r, p1 + p2, q1 + q2)
        if E1.dim == 0 or E2.dim == 0:
            return la.zeros(E3.dim, E1.dim * E2.dim)
        prod = self.tc.matrix(p1 + q1, p2 + q2) * la.kron(E1.reps, E2.reps)
        return E3.coords(prod)

    def well_defined(self, r, p1, q1, p2, q2):
        """Products of denominators land in the target denominator."""
        S1, S2, S3 = self.S
        E1, E2 = S1.page(r, p1, q1), S2.page(r, p2, q2)
        E3 = S3.page(r, p1 + p2, q1 + q2)
        n1, n2 = p1 + q1, p2 + q2
        M = self.tc.matrix(n1, n2)
        for X, Y in ((E1.den, E2.num), (E1.num, E2.den)):
            if X.ncols() and Y.ncols():
                if not la.contains(E3.den, M * la.kron(X, Y)):
                    return False
        for X, Y in ((E1.num, E2.num),):
            if X.ncols() and Y.ncols() and not E3.contains(M * la.kron(X, Y)):
                return False
        return True

    def leibniz_ok(self, r, p1, q1, p2, q2):
        """d_r(x ∪ y) = d_r x ∪ y + (-1)^{p1+q1} x ∪ d_r y on E_r."""
        S1, S2, S3 = self.S
        lhs = S3.d_r(r, p1 + p2, q1 + q2) * self.matrix(r, p1, q1, p2, q2)
        a = self.matrix(r, p1 + r, q1 - r + 1, p2, q2) * la.kron(
            S1.d_r(r, p1, q1), la.eye(S2.dim(r, p2, q2)))
        b = self.matrix(r, p1, q1, p2 + r, q2 - r + 1) * la.kron(
            la.eye(S1.dim(r, p1, q1)), S2.d_r(r, p2, q2))
        return lhs == a + b * _sign(p1 + q1)

    def induced_ok(self, r, p1, q1, p2, q2):
        """∪_{r+1} is induced by ∪_r: classes of E_{r+1} reps multiply compatibly."""
        S1, S2, S3 = self.S
        # E_{r+1} representatives are E_r cycles; their E_r product must be an E_r cycle
        # whose E_{r+1} class equals the E_{r+1} product (true by construction on reps).
        F1, F2 = S1.page(r + 1, p1, q1), S2.page(r + 1, p2, q2)
        if F1.dim == 0 or F2.dim == 0:
            return True
        prod = self.tc.matrix(p1 + q1, p2 + q2) * la.kron(F1.reps, F2.reps)
        return S3.page(r + 1, p1 + p2, q1 + q2).contains(prod)
