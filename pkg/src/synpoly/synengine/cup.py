"""Cup products of syntomic double complexes and the trace pairing.

With a splitting (P1*P2)(X1 X2) = p1 P1(X1) + p2 P2(X2) the product is

    u1 ∪ u2             = m_an(u1 ⊗ u2)
    u1 ∪ (x2, y2)       = (p2(Phi1, Phi2) m(u1 ⊗ x2), (1 - lam) [gamma u1 ⊗ y2])
    (x1, y1) ∪ u2       = (p1(Phi1, Phi2) m(x1 ⊗ u2), lam [y1 ⊗ gamma u2])
    (x1, y1) ∪ (x2, y2) = 0

where [a ⊗ b] lifts the quotient classes, multiplies in C_dR and projects to
C_dR/Fil^{r1+r2}.
"""
from dataclasses import dataclass

from .. import linalg as la
from ..homcore import CupFamily, PageProducts, TotalCup, dbl_cup_leibniz_check, filtration_preserved
from ..scalars import Poly2, composed_product, split_residual
from .package import GeometricPackage, PackageError
from .syn import SynComplex, f_filtration
from .trace import TraceContext, trace_map


def _poly2_of(p, A, B):
    """sum c_ab kron(A^a, B^b)."""
    out = la.zeros(A.nrows() * B.nrows(), A.ncols() * B.ncols())
    if out.nrows() == 0 or out.ncols() == 0:
        return out
    pa, pb = {}, {}
    for (a, b), c in p.t.items():
        if a not in pa:
            pa[a] = la.polyval_matrix([0] * a + [1], A)
        if b not in pb:
            pb[b] = la.polyval_matrix([0] * b + [1], B)
        out += la.kron(pa[a], pb[b]) * la.q(c)
    return out


@dataclass(eq=False)
class PairingData:
    """Products C_an1 ⊗ C_an2 -> C_an3 and C_dR1 ⊗ C_dR2 -> C_dR3 plus (lam, splitting).

    ``m_an[(a, b)]`` is C3^{a+b} <- C1^a ⊗ C2^b in kron coordinates, similarly ``m_dR``.
    """

    G1: GeometricPackage
    G2: GeometricPackage
    G3: GeometricPackage
    m_an: dict
    m_dR: dict
    lam: object = 1
    split: tuple = None
    check: bool = True

    def __post_init__(self):
        self.lam = la.q(self.lam)
        if self.check:
            self.validate()

    def an(self, a, b):
        m = self.m_an.get((a, b))
        want = (self.G3.C_an.dim(a + b), self.G1.C_an.dim(a) * self.G2.C_an.dim(b))
        return m if m is not None else la.zeros(*want)

    def dR(self, a, b):
        m = self.m_dR.get((a, b))
        want = (self.G3.C_dR.dim(a + b), self.G1.C_dR.dim(a) * self.G2.C_dR.dim(b))
        return m if m is not None else la.zeros(*want)

    def validate(self):
        G1, G2, G3 = self.G1, self.G2, self.G3
        for name, Cs, mul in (("an", (G1.C_an, G2.C_an, G3.C_an), self.an),
                              ("dR", (G1.C_dR, G2.C_dR, G3.C_dR), self.dR)):
            C1, C2, C3 = Cs
            for a in C1.degrees:
                for b in C2.degrees:
                    m = mul(a, b)
                    lhs = C3.d(a + b) * m
                    rhs = (mul(a + 1, b) * la.kron(C1.d(a), la.eye(C2.dim(b)))
                           + mul(a, b + 1) * la.kron(la.eye(C1.dim(a)), C2.d(b)) * (-1 if a % 2 else 1))
                    if lhs != rhs:
                        raise PackageError("%s product is not Leibniz" % name, "degrees (%d,%d)" % (a, b))
        for a in G1.C_an.degrees:
            for b in G2.C_an.degrees:
                m = self.an(a, b)
                if G3.phi.at(a + b) * m != m * la.kron(G1.phi.at(a), G2.phi.at(b)):
                    raise PackageError("product does not commute with Phi", "degrees (%d,%d)" % (a, b))
                if G3.gam.at(a + b) * m != self.dR(a, b) * la.kron(G1.gam.at(a), G2.gam.at(b)):
                    raise PackageError("product does not commute with gamma", "degrees (%d,%d)" % (a, b))
        for s in range(G1.fil.lo - 1, G1.fil.hi + 2):
            for t in range(G2.fil.lo - 1, G2.fil.hi + 2):
                for a in G1.C_dR.degrees:
                    for b in G2.C_dR.degrees:
                        K = la.kron(G1.fil.basis(s, a), G2.fil.basis(t, b))
                        if K.ncols() and not la.contains(G3.fil.basis(s + t, a + b), self.dR(a, b) * K):
                            raise PackageError("Fil^%d * Fil^%d is not in Fil^%d" % (s, t, s + t),
                                               "degrees (%d,%d)" % (a, b))

    def with_lam(self, lam):
        return PairingData(self.G1, self.G2, self.G3, self.m_an, self.m_dR, lam, self.split, check=False)

    def with_split(self, split):
        return PairingData(self.G1, self.G2, self.G3, self.m_an, self.m_dR, self.lam, split, check=False)


class SynCup:
    """The cup family K_{P1,r1} ⊗ K_{P2,r2} -> K_{P1*P2, r1+r2}."""

    def __init__(self, S1: SynComplex, S2: SynComplex, PD: PairingData, S3: SynComplex = None):
        if S1.G is not PD.G1 or S2.G is not PD.G2:
            raise PackageError("syntomic complexes do not match the pairing data")
        self.S1, self.S2, self.PD = S1, S2, PD
        P3 = composed_product(S1.P, S2.P)
        if S3 is None:
            S3 = SynComplex(PD.G3, P3, S1.r + S2.r)
        elif S3.P != P3 or S3.r != S1.r + S2.r or S3.G is not PD.G3:
            raise PackageError("target is not K_{P1*P2, r1+r2} of the third package")
        self.S3 = S3
        if PD.split is None:
            raise PackageError("pairing data needs a splitting (p1, p2)")
        p1, p2 = PD.split
        res = split_residual(S1.P, S2.P, p1, p2)
        if not res.is_zero():
            raise PackageError("splitting identity has nonzero residual %r" % (res,), "split")
        self.p1, self.p2 = p1, p2
        self._check_well_defined()
        self.family = CupFamily(S1.D, S2.D, S3.D, rule=self._block)
        self.total = TotalCup(self.family)

    def _check_well_defined(self):
        """The lam-weighted terms only descend to the quotients if Fil*gamma lands in Fil^{r1+r2}."""
        S1, S2, S3, PD = self.S1, self.S2, self.S3, self.PD
        G1, G2 = PD.G1, PD.G2
        for a in G1.C_dR.degrees:
            for b in G2.C_an.degrees:
                if PD.lam != 0:
                    K = la.kron(G1.fil.basis(S1.r, a), G2.gam.at(b))
                    if K.ncols() and not la.is_zero(self._proj3(a + b) * PD.dR(a, b) * K):
                        raise PackageError("lam != 0 needs Fil^r1 * gamma(C_an2) in Fil^(r1+r2)",
                                           "degrees (%d,%d)" % (a, b))
        for a in G1.C_an.degrees:
            for b in G2.C_dR.degrees:
                if PD.lam != 1:
                    K = la.kron(G1.gam.at(a), G2.fil.basis(S2.r, b))
                    if K.ncols() and not la.is_zero(self._proj3(a + b) * PD.dR(a, b) * K):
                        raise PackageError("lam != 1 needs gamma(C_an1) * Fil^r2 in Fil^(r1+r2)",
                                           "degrees (%d,%d)" % (a, b))

    def _proj3(self, n):
        proj = self.S3.proj
        if n in proj:
            return proj[n]
        return la.zeros(0, self.PD.G3.C_dR.dim(n))

    def _lift(self, S, q):
        return S.lift[q] if q in S.lift else la.zeros(S.G.C_dR.dim(q), 0)

    def _block(self, p1, q1, p2, q2):
        S1, S2, PD = self.S1, self.S2, self.PD
        G1, G2 = PD.G1, PD.G2
        n = q1 + q2
        a1, a2 = G1.C_an.dim(q1), G2.C_an.dim(q2)
        b1, b2 = S1.Q.dim(q1), S2.Q.dim(q2)
        if (p1, p2) == (0, 0):
            return PD.an(q1, q2)
        if (p1, p2) == (0, 1):
            Sx = la.hstack(la.eye(a2), la.zeros(a2, b2), nrows=a2)
            Sy = la.hstack(la.zeros(b2, a2), la.eye(b2), nrows=b2)
            x = PD.an(q1, q2) * _poly2_of(self.p2, G1.phi.at(q1), G2.phi.at(q2)) * la.kron(la.eye(a1), Sx)
            y = (self._proj3(n) * PD.dR(q1, q2) * la.kron(G1.gam.at(q1), self._lift(S2, q2))
                 * la.kron(la.eye(a1), Sy)) * (1 - PD.lam)
            return la.vstack(x, y, ncols=a1 * (a2 + b2))
        if (p1, p2) == (1, 0):
            Sx = la.hstack(la.eye(a1), la.zeros(a1, b1), nrows=a1)
            Sy = la.hstack(la.zeros(b1, a1), la.eye(b1), nrows=b1)
            x = PD.an(q1, q2) * _poly2_of(self.p1, G1.phi.at(q1), G2.phi.at(q2)) * la.kron(Sx, la.eye(a2))
            y = (self._proj3(n) * PD.dR(q1, q2) * la.kron(self._lift(S1, q1), G2.gam.at(q2))
                 * la.kron(Sy, la.eye(a2))) * PD.lam
            return la.vstack(x, y, ncols=(a1 + b1) * a2)
        return None

    def leibniz(self):
        return dbl_cup_leibniz_check(self.family)

    def on_cohomology(self, n1, n2):
        return self.total.on_cohomology(n1, n2)

    def respects_filtration(self, n1, n2):
        return filtration_preserved(self.total, n1, n2)


def syn_cup(S1, S2, PD, S3=None):
    return SynCup(S1, S2, PD, S3)


def pairing(cup: SynCup, ctx: TraceContext, i):
    """Matrix of <a, b> = Tr(a ∪ b) on H^i(K1) x H^{n-i}(K2), n the trace degree."""
    S3 = cup.S3
    if ctx.S.G is not S3.G or ctx.S.P != S3.P or ctx.S.r != S3.r:
        raise PackageError("trace context does not match the product target")
    n = ctx.degree
    H1, H2 = cup.S1.T.cohomology(i), cup.S2.T.cohomology(n - i)
    out = la.zeros(H1.dim, H2.dim)
    if H1.dim == 0 or H2.dim == 0:
        return out
    M = cup.total.matrix(i, n - i)
    for a in range(H1.dim):
        prods = M * la.kron(H1.rep(a), H2.reps)
        row = trace_map(ctx, prods)
        for b in range(H2.dim):
            out[a, b] = row[0, b]
    return out


@dataclass
class R3bisReport:
    i: int
    syntomic: object
    de_rham: object

    @property
    def ok(self):
        return self.syntomic == self.de_rham


def r3bis_check(cup: SynCup, ctx: TraceContext, i):
    """F^1 H^i(K1) x H^{n-i}(K2) against Tr_dR(lift y1 * f), f = gamma u2 - d lift y2 in Fil^{r2}.

    F^1 classes are represented by (0; 0, y1) with y1 a cocycle of C_dR1/Fil^{r1}
    in degree i-1. Rows are indexed by H^{i-1}(C_dR1/Fil^{r1}) representatives,
    columns by H^{n-i}(K2) representatives.
    """
    S1, S2, PD = cup.S1, cup.S2, cup.PD
    n = ctx.degree
    HQ1 = S1.Q.cohomology(i - 1)
    H2 = S2.T.cohomology(n - i)
    syn = la.zeros(HQ1.dim, H2.dim)
    dr = la.zeros(HQ1.dim, H2.dim)
    if HQ1.dim == 0 or H2.dim == 0:
        return R3bisReport(i, syn, dr)
    G2 = PD.G2
    M = cup.total.matrix(i, n - i)
    lift1 = cup._lift(S1, i - 1)
    for a in range(HQ1.dim):
        y1 = HQ1.rep(a)
        v1 = S1.cochain(i, y=y1)
        row = trace_map(ctx, M * la.kron(v1, H2.reps))
        for b in range(H2.dim):
            syn[a, b] = row[0, b]
            u2, _, y2 = S2.parts(n - i, H2.rep(b))
            f = G2.gam.at(n - i) * u2
            if y2.nrows():
                f = f - G2.C_dR.d(n - i - 1) * cup._lift(S2, n - i - 1) * y2
            val = ctx.tr_dR * PD.dR(i - 1, n - i) * la.kron(lift1 * y1, f)
            dr[a, b] = val[0, 0]
    return R3bisReport(i, syn, dr)


def e2_pairing_matrices(cup: SynCup, n1=None, n2=None):
    """{(p1, q1, p2, q2): matrix of the E_2 product} over all bidegrees (optionally fixed totals)."""
    pp = PageProducts(cup.total)
    out = {}
    for (p1, q1) in cup.S1.D.bidegrees:
        if n1 is not None and p1 + q1 != n1:
            continue
        for (p2, q2) in cup.S2.D.bidegrees:
            if n2 is not None and p2 + q2 != n2:
                continue
            if cup.S3.D.dim(p1 + p2, q1 + q2) == 0:
                continue
            out[(p1, q1, p2, q2)] = pp.matrix(2, p1, q1, p2, q2)
    return out
