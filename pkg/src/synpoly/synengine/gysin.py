"""Residue sequences of packages, Gysin maps and their adjunction with pullback.

A bundle is a degreewise exact sequence of packages

    0 -> G --inc--> G' --res--> twist_shift(G_F) -> 0

(strict on every Fil^r) together with a restriction morphism G -> G_F, product
data on G and G_F and the trace on G. Applying K_{P,r} gives an exact sequence
of syntomic complexes whose quotient is K_{P(pX), r-1}(G_F)[-1]; the Gysin map
is its connecting map.
"""
from dataclasses import dataclass, field

from .. import linalg as la
from ..homcore import SES, ChainMap
from ..scalars import Poly, Poly2, composed_product
from .cup import PairingData, SynCup
from .package import GeometricPackage, PackageError, PackageMorphism, twist_shift
from .syn import SynComplex
from .trace import TraceContext


def twist_poly(P, c):
    """P(cX)."""
    P = P if isinstance(P, Poly) else Poly(P)
    return P.scale_var(c)


def _syn_map(f: PackageMorphism, S: SynComplex, T: SynComplex):
    """Tot(S) -> Tot(T) induced by a package morphism."""
    mats = {}
    for n in S.T.degrees:
        du, dx, dy = S.dims(n)
        eu, ex, ey = T.dims(n)
        blk = la.block([[f.f_an.at(n) if du and eu else None, None, None],
                        [None, f.f_an.at(n - 1) if dx and ex else None, None],
                        [None, None, f.on_quotient(S.r, n - 1) if dy and ey else None]],
                       [eu, ex, ey], [du, dx, dy])
        mats[n] = T.cochain(n, *_split_rows(blk, eu, ex, ey))
    return ChainMap(S.T, T.T, mats)


def _split_rows(M, a, b, c):
    k = M.ncols()
    return (la.get_block(M, 0, a, 0, k), la.get_block(M, a, a + b, 0, k), la.get_block(M, a + b, a + b + c, 0, k))


def shift_identification(Sq: SynComplex, SF: SynComplex):
    """(u; x, y) -> (u; -x, -y) from K_{P,r}(twist_shift G_F) to K_{P(pX), r-1}(G_F), degree -1."""
    mats = {}
    for n in Sq.T.degrees:
        du, dx, dy = Sq.dims(n)
        eu, ex, ey = SF.dims(n - 1)
        if (du, dx, dy) != (eu, ex, ey):
            raise PackageError("quotient does not match the shifted residue complex", "degree %d" % n)
        u, x, y = _split_rows(la.eye(du + dx + dy), du, dx, dy)
        mats[n] = SF.cochain(n - 1, u, -x, -y)
    return ChainMap(Sq.T, SF.T, mats, degree=-1)


@dataclass(eq=False)
class GysinBundle:
    G: GeometricPackage          # the ambient package (sub)
    Gp: GeometricPackage         # log package
    GF: GeometricPackage         # the divisor package
    inc: dict                    # {"an": {q: M}, "dR": {q: M}} for G -> G'
    res: dict                    # same for G' -> twist_shift(GF)
    rest: dict                   # same for the pullback G -> GF
    m_X: tuple                   # (m_an, m_dR) products on G
    m_F: tuple                   # (m_an, m_dR) products on GF
    tr_X: object                 # trace row on C_dR(G)^{2d}
    Gq: GeometricPackage = field(init=False)

    def __post_init__(self):
        self.Gq = twist_shift(self.GF, name="%s(-1)[-1]" % self.GF.name)
        self.i = PackageMorphism(self.G, self.Gp, self.inc["an"], self.inc["dR"])
        self.pi = PackageMorphism(self.Gp, self.Gq, self.res["an"], self.res["dR"])
        self.iota = PackageMorphism(self.G, self.GF, self.rest["an"], self.rest["dR"])
        for what, X0, X1, X2, a, b in (("an", self.G.C_an, self.Gp.C_an, self.Gq.C_an, self.i.f_an, self.pi.f_an),
                                       ("dR", self.G.C_dR, self.Gp.C_dR, self.Gq.C_dR, self.i.f_dR, self.pi.f_dR)):
            try:
                SES(X0, X1, X2, a, b)
            except ValueError as e:
                raise PackageError(str(e), "residue sequence (%s)" % what) from None
        self._check_strict()
        self._trF = {}

    def _check_strict(self):
        lo = min(self.G.fil.lo, self.Gp.fil.lo, self.Gq.fil.lo) - 1
        hi = max(self.G.fil.hi, self.Gp.fil.hi, self.Gq.fil.hi) + 1
        for r in range(lo, hi + 1):
            for q in self.Gp.C_dR.degrees:
                Fp = self.Gp.fil.basis(r, q)
                img = self.pi.f_dR.at(q) * Fp
                if la.rank(img) != self.Gq.fil.basis(r, q).ncols():
                    raise PackageError("res is not strict on Fil^%d" % r, "degree %d" % q)
                sub = self.i.f_dR.at(q) * self.G.fil.basis(r, q)
                ker = la.intersect(la.span(self.i.f_dR.at(q), dim=Fp.nrows()), Fp)
                if la.rank(sub) != ker.ncols():
                    raise PackageError("inc is not strict on Fil^%d" % r, "degree %d" % q)

    @property
    def d(self):
        return self.G.d

    # -- syntomic side ----------------------------------------------------------

    def syn_ses(self, P, r):
        S0, S1, S2 = (SynComplex(X, P, r) for X in (self.G, self.Gp, self.Gq))
        ses = SES(S0.T, S1.T, S2.T, _syn_map(self.i, S0, S1), _syn_map(self.pi, S1, S2))
        return S0, S1, S2, ses

    def F_complex(self, P, r):
        return SynComplex(self.GF, twist_poly(P, self.G.p), r - 1)

    def trace_F_row(self, rF):
        """Tr_X o (de Rham Gysin) as a row on C_dR(G_F)^{2d-2}, zero on coboundaries and on Fil^rF."""
        if rF not in self._trF:
            t = 2 * self.d
            D0, D1, DF = self.G.C_dR, self.Gp.C_dR, self.GF.C_dR
            ses = SES(D0, D1, self.Gq.C_dR, self.i.f_dR, self.pi.f_dR)
            HF = DF.cohomology(t - 2)
            n = DF.dim(t - 2)
            if HF.dim:
                delta = ses.connecting_map(t - 1)        # H^{t-1}(Gq) = H^{t-2}(GF)
                vals = self.tr_X * D0.cohomology(t).reps * delta
            else:
                vals = la.zeros(1, 0)
            cons = [HF.reps, HF.B]
            rhs = [vals, la.zeros(1, HF.B.ncols())]
            Fb = self.GF.fil.basis(rF, t - 2)
            cons.append(Fb)
            rhs.append(la.zeros(1, Fb.ncols()))
            A = la.hstack(*cons, nrows=n)
            b = la.hstack(*rhs, nrows=1)
            sol = la.solve(A.transpose(), b.transpose()) if n else la.zeros(0, 1)
            if sol is None:
                raise PackageError("de Rham Gysin trace does not factor through the quotient by Fil", "trace")
            self._trF[rF] = sol.transpose()
        return self._trF[rF]

    def trace_X(self, P, r, certificate):
        return TraceContext(self.G, self.tr_X, P, r, certificate)

    def trace_F(self, P, r, certificate):
        """Trace on the divisor side for (P(pX), r - 1), P the ambient polynomial."""
        return TraceContext(self.GF, self.trace_F_row(r - 1), twist_poly(P, self.G.p), r - 1, certificate,
                            top=2 * self.d - 2)

    def pairing_X(self, split, lam=1):
        return PairingData(self.G, self.G, self.G, self.m_X[0], self.m_X[1], lam, split)

    def pairing_F(self, split, lam=1, twisted=1):
        """F-side product data with splitting p_i(pX1, X2) (twisted=1) or p_i(X1, pX2) (twisted=2)."""
        p = self.G.p
        c1, c2 = (p, 1) if twisted == 1 else (1, p)
        q1, q2 = (s.subs_scale(c1, c2) for s in split)
        return PairingData(self.GF, self.GF, self.GF, self.m_F[0], self.m_F[1], lam, (q1, q2))


# -- Gysin maps -------------------------------------------------------------------

@dataclass
class GysinResult:
    matrix: object        # H^{i-2}(K_F) -> H^i(K_X)
    snake: object         # the same via homcore's connecting map
    lift_independent: bool

    @property
    def agrees(self):
        return self.matrix == self.snake


def gysin(bundle: GysinBundle, P, r, i, rng=None, trials=2):
    """Gys: H^{i-2}(K_{P(pX), r-1}(G_F)) -> H^i(K_{P,r}(G)) by lift, differentiate, solve."""
    S0, S1, S2, ses = bundle.syn_ses(P, r)
    SF = bundle.F_complex(P, r)
    J = shift_identification(S2, SF)
    HF = SF.T.cohomology(i - 2)
    H0 = S0.T.cohomology(i)
    if HF.dim == 0:
        z = la.zeros(H0.dim, 0)
        return GysinResult(z, z, True)
    Jinv = la.inverse(J.at(i - 1)) if S2.T.dim(i - 1) else la.zeros(0, 0)
    c = Jinv * HF.reps                                  # cocycles of Tot(S2)^{i-1}
    lift = ses.lift(i - 1, c)
    M = _gysin_of(ses, S0, lift, i)
    # snake oracle: connecting map composed with the inverse identification on cohomology
    Jc = J.on_cohomology(i - 1)                         # H^{i-1}(S2) -> H^{i-2}(SF)
    snake = ses.connecting_map(i - 1) * la.inverse(Jc) if Jc.ncols() else la.zeros(H0.dim, HF.dim)
    ok = True
    if rng is not None:
        K = S0.T.dim(i - 1)
        for _ in range(trials):
            k = la.mat([[rng.randint(-3, 3) for _ in range(HF.dim)] for _ in range(K)], K, HF.dim)
            if _gysin_of(ses, S0, lift + ses.i.at(i - 1) * k, i) != M:
                ok = False
    return GysinResult(M, snake, ok)


def _gysin_of(ses, S0, lift, i):
    db = ses.B.d(i - 1) * lift
    a = la.solve(ses.i.at(i), db)
    if a is None:
        raise ArithmeticError("d(lift) does not come from the subcomplex")
    return S0.T.cohomology(i).class_of(a)


def gysin_cochain(bundle, P, r, i, v):
    """Gysin image of cocycle columns v of Tot(K_F)^{i-2}, as cocycles of Tot(K_X)^i."""
    S0, S1, S2, ses = bundle.syn_ses(P, r)
    SF = bundle.F_complex(P, r)
    J = shift_identification(S2, SF)
    c = la.inverse(J.at(i - 1)) * v
    lift = ses.lift(i - 1, c)
    a = la.solve(ses.i.at(i), ses.B.d(i - 1) * lift)
    return a


def pullback(bundle, P, r, i):
    """iota^*: H^i(K_{P,r}(G)) -> H^i(K_{P,r}(G_F)) as a matrix, and the complexes."""
    S = SynComplex(bundle.G, P, r)
    T = SynComplex(bundle.GF, P, r)
    m = _syn_map(bundle.iota, S, T)
    return m.on_cohomology(i), S, T, m


# -- adjunction ---------------------------------------------------------------------

@dataclass
class AdjunctionVerdict:
    ok: bool
    lhs: object
    rhs: object
    mismatches: list
    trace_compatible: bool = True

    def __bool__(self):
        return self.ok and self.trace_compatible


def gysin_adjunction_check(bundle: GysinBundle, P1, r1, P2, r2, i, split, cert_X, cert_F,
                           which="first", rng=None, lam=None):
    """Compare <Gys f, g> with <f, iota^* g> (which="first") or <f, Gys g> with <iota^* f, g>.

    ``split`` splits (P1, P2) on the ambient side; the divisor side uses the
    substituted splitting. Degrees: f in H^{i-2}(K_F), g in H^{2d+1-i}(K_X) for
    "first"; f in H^i(K_X), g in H^{2d-1-i}(K_F) for "second". The default lam
    puts the de Rham term on the Gysin side (1 for "first", 0 for "second").
    """
    if lam is None:
        lam = 1 if which == "first" else 0
    p = bundle.G.p
    P1, P2 = Poly(list(P1)), Poly(list(P2))
    P3 = composed_product(P1, P2)
    n = 2 * bundle.d + 1
    trX = bundle.trace_X(P3, r1 + r2, cert_X)
    trF = bundle.trace_F(P3, r1 + r2, cert_F)
    from .cup import pairing
    if which == "first":
        SX1, SX2 = SynComplex(bundle.G, P1, r1), SynComplex(bundle.G, P2, r2)
        cupX = SynCup(SX1, SX2, bundle.pairing_X(split, lam), trX.S)
        SF1 = bundle.F_complex(P1, r1)
        SF2 = SynComplex(bundle.GF, P2, r2)
        cupF = SynCup(SF1, SF2, bundle.pairing_F(split, lam, twisted=1), trF.S)
        gy = gysin(bundle, P1, r1, i, rng=rng)
        pb, _, _, _ = pullback(bundle, P2, r2, n - i)
        LX = pairing(cupX, trX, i)                    # H^i x H^{n-i}
        LF = pairing(cupF, trF, i - 2)                # H^{i-2} x H^{n-i}(F)
        lhs = (gy.matrix.transpose() * LX) if LX.nrows() else la.zeros(gy.matrix.ncols(), LX.ncols())
        rhs = LF * pb if LF.ncols() else la.zeros(LF.nrows(), pb.ncols())
    else:
        SX1, SX2 = SynComplex(bundle.G, P1, r1), SynComplex(bundle.G, P2, r2)
        cupX = SynCup(SX1, SX2, bundle.pairing_X(split, lam), trX.S)
        SF1 = SynComplex(bundle.GF, P1, r1)
        SF2 = bundle.F_complex(P2, r2)
        cupF = SynCup(SF1, SF2, bundle.pairing_F(split, lam, twisted=2), trF.S)
        gy = gysin(bundle, P2, r2, n - i, rng=rng)
        pb, _, _, _ = pullback(bundle, P1, r1, i)
        LX = pairing(cupX, trX, i)                    # H^i x H^{n-i}
        LF = pairing(cupF, trF, i)                    # H^i(F) x H^{n-i-2}(F)
        lhs = LX * gy.matrix if LX.nrows() and LX.ncols() else la.zeros(LX.nrows(), gy.matrix.ncols())
        rhs = pb.transpose() * LF if LF.nrows() else la.zeros(pb.ncols(), LF.ncols())
    mism = [(a, b, lhs[a, b], rhs[a, b]) for a in range(lhs.nrows()) for b in range(lhs.ncols())
            if lhs[a, b] != rhs[a, b]]
    ok = not mism and gy.agrees and gy.lift_independent
    return AdjunctionVerdict(ok, lhs, rhs, mism)


def gysin_trace_check(bundle, P, r, cert_X, cert_F):
    """Tr_{P,r}(Gys f) = Tr_{P(pX), r-1}(f) on top classes."""
    n = 2 * bundle.d + 1
    trX = bundle.trace_X(P, r, cert_X)
    trF = bundle.trace_F(P, r, cert_F)
    gy = gysin(bundle, P, r, n)
    HF = trF.S.T.cohomology(n - 2)
    if HF.dim == 0:
        return True
    return trX.row() * gy.matrix == trF.row()
