"""Syntomic polynomial double complexes K_{P,r} and their first structural facts.

K^{0,q} = C_an^q and K^{1,q} = C_an^q ⊕ (C_dR/Fil^r)^q, with horizontal map
u -> (P(Phi) u, gamma-bar u). In total degree n a cochain is (u; x, y) with
u in C_an^n and (x, y) in K^{1,n-1}, and

    d(u; x, y) = (d u; P(Phi) u - d x, gamma-bar u - d y).
"""
from dataclasses import dataclass

from .. import linalg as la
from ..homcore import ChainMap, DoubleComplex, SpectralSequence, cone
from ..scalars import Poly, _check_ct1
from .package import GeometricPackage, PackageError


class NotInvertible(ArithmeticError):
    """P(Phi) has a kernel on cohomology; ``witness`` is a cocycle in it."""

    def __init__(self, msg, witness):
        super().__init__(msg)
        self.witness = witness


class SynComplex:
    def __init__(self, G: GeometricPackage, P, r):
        self.G = G
        self.P = _check_ct1(P if isinstance(P, Poly) else Poly(P))
        self.r = int(r)
        Q, self.proj, self.lift = G.quotient(self.r)
        self.Q = Q
        A = G.C_an
        qs = sorted(set(A.degrees) | set(Q.degrees))
        dims, d1, d2 = {}, {}, {}
        for q in qs:
            dims[(0, q)] = A.dim(q)
            dims[(1, q)] = A.dim(q) + Q.dim(q)
        for q in qs:
            d1[(0, q)] = la.vstack(G.P_of_Phi(self.P, q), G.gamma_bar(self.r, q), ncols=A.dim(q))
            d2[(0, q)] = A.d(q)
            d2[(1, q)] = la.block([[A.d(q), None], [None, Q.d(q)]],
                                  [A.dim(q + 1), Q.dim(q + 1)], [A.dim(q), Q.dim(q)])
        self.D = DoubleComplex(dims, d1, d2)
        self.T = self.D.total()

    def __repr__(self):
        return "SynComplex(%s, P=%s, r=%d)" % (self.G.name or "package", list(self.P), self.r)

    # -- cochain bookkeeping ----------------------------------------------------

    def dims(self, n):
        return self.G.C_an.dim(n), self.G.C_an.dim(n - 1), self.Q.dim(n - 1)

    def cochain(self, n, u=None, x=None, y=None):
        """Columns of Tot^n assembled from their three components (None = 0)."""
        du, dx, dy = self.dims(n)
        k = next((m.ncols() for m in (u, x, y) if m is not None), 1)
        parts = [m if m is not None else la.zeros(dd, k) for m, dd in ((u, du), (x, dx), (y, dy))]
        out = la.zeros(self.T.dim(n), k)
        if du:
            la.set_block(out, self.T.offset(0, n), 0, parts[0])
        if dx + dy:
            la.set_block(out, self.T.offset(1, n - 1), 0, la.vstack(parts[1], parts[2], ncols=k))
        return out

    def parts(self, n, v):
        du, dx, dy = self.dims(n)
        u = self.T.component(0, n, v) if du else la.zeros(0, v.ncols())
        xy = self.T.component(1, n - 1, v) if dx + dy else la.zeros(0, v.ncols())
        return u, la.get_block(xy, 0, dx, 0, v.ncols()), la.get_block(xy, dx, dx + dy, 0, v.ncols())

    def column_map(self):
        """The chain map column 0 -> column 1 given by d1."""
        C0, C1 = self.D.column(0), self.D.column(1)
        return ChainMap(C0, C1, {q: self.D.d1(0, q) for q in C0.degrees})

    def h(self, n):
        return self.T.h(n)

    def betti(self):
        return self.T.betti()


def build_syn(G: GeometricPackage, P, r):
    return SynComplex(G, P, r)


# -- the F^0 / F^1 decomposition ------------------------------------------------

@dataclass
class FFiltration:
    i: int
    H: int
    F1: int
    F0: int
    section: object      # H^{i-1}(column 1) -> H^i(Tot), image = F^1
    projection: object   # H^i(Tot) -> H^i(column 0), image = F^0
    exact: bool
    e2_agrees: bool

    def as_dict(self):
        return {"i": self.i, "H": self.H, "F1": self.F1, "F0": self.F0,
                "exact": self.exact, "E2_agrees": self.e2_agrees}


def f_filtration(S: SynComplex, i, check_e2=True):
    T = S.T
    c = S.column_map()
    C0, C1 = c.S, c.T
    Hprev = c.on_cohomology(i - 1)
    Hcur = c.on_cohomology(i)
    F1 = Hprev.nrows() - la.rank(Hprev)
    F0 = Hcur.ncols() - la.rank(Hcur)
    HT = T.cohomology(i)

    H1 = C1.cohomology(i - 1)
    if H1.dim and T.dim(i):
        section = HT.class_of(T.inject(1, i - 1, H1.reps))
    else:
        section = la.zeros(HT.dim, H1.dim)
    H0 = C0.cohomology(i)
    if HT.dim and C0.dim(i):
        projection = H0.class_of(T.component(0, i, HT.reps))
    else:
        projection = la.zeros(H0.dim, HT.dim)

    exact = (la.rank(section) == F1 and la.rank(projection) == F0
             and HT.dim == F1 + F0
             and la.is_zero(projection * section)
             and la.is_zero(Hcur * projection)
             and la.is_zero(section * Hprev))
    e2 = True
    if check_e2:
        SS = SpectralSequence(S.D)
        e2 = SS.dim(2, 1, i - 1) == F1 and SS.dim(2, 0, i) == F0 \
            and SS.infinity_page(1, i - 1).dim == F1 and SS.infinity_page(0, i).dim == F0
    return FFiltration(i, HT.dim, F1, F0, section, projection, exact, e2)


# -- change of (P, r) -------------------------------------------------------------

def compare_prq(S: SynComplex, Q, s):
    """K_{P,r} -> K_{Q,s} for P | Q and s <= r: u -> u, (x, y) -> (P'(Phi) x, y mod Fil^s)."""
    Q = _check_ct1(Q if isinstance(Q, Poly) else Poly(Q))
    Pp, rem = divmod(Q, S.P)
    if rem.degree >= 0:
        raise ArithmeticError("%r does not divide %r" % (S.P, Q))
    if s > S.r:
        raise ValueError("need s <= r, got s=%d r=%d" % (s, S.r))
    S2 = SynComplex(S.G, Q, s)
    G = S.G
    _, proj_s, _ = G.quotient(s)
    mats = {}
    for n in S.T.degrees:
        du, dx, dy = S.dims(n)
        eu, ex, ey = S2.dims(n)
        yq = proj_s[n - 1] * S.lift[n - 1] if dy and ey else la.zeros(ey, dy)
        blk = la.block([[la.eye(du), None, None],
                        [None, G.P_of_Phi(Pp, n - 1) if dx else None, None],
                        [None, None, yq if dy and ey else None]],
                       [eu, ex, ey], [du, dx, dy])
        # reorder from (u, x, y) blocks to the Tot layout of both complexes
        mats[n] = _layout(S2, n) * blk * _layout(S, n).transpose()
    return S2, ChainMap(S.T, S2.T, mats)


def _layout(S, n):
    """Permutation taking (u, x, y)-ordered coordinates to Tot^n coordinates."""
    du, dx, dy = S.dims(n)
    k = du + dx + dy
    return S.cochain(n, la.get_block(la.eye(k), 0, du, 0, k),
                     la.get_block(la.eye(k), du, du + dx, 0, k),
                     la.get_block(la.eye(k), du + dx, k, 0, k))


# -- the inverse on F^1 ------------------------------------------------------------

@dataclass
class F1Inverse:
    S: SynComplex
    i: int
    forward: object       # H^{i-1}(C_dR/Fil^r) -> H^i(Tot)
    Pinv: object          # inverse of P(Phi) on H^{i-1}(C_an)
    F0_prev_zero: bool

    def backward(self, v):
        """[(u; x, y)] -> y - gamma-bar(P(Phi)^{-1} x) in H^{i-1}(C_dR/Fil^r) coordinates."""
        S, i, G = self.S, self.i, self.S.G
        A = G.C_an
        u, x, y = S.parts(i, v)
        if A.dim(i) and not la.is_zero(u):
            w = la.solve(A.d(i - 1), u) if A.dim(i - 1) else None
            if w is None:
                raise ValueError("class does not lie in F^1 (its C_an part is not exact)")
            x = x - G.P_of_Phi(S.P, i - 1) * w
            y = y - G.gamma_bar(S.r, i - 1) * w
        HA, HQ = A.cohomology(i - 1), S.Q.cohomology(i - 1)
        if HQ.dim == 0:
            return la.zeros(0, v.ncols())
        if HA.dim:
            a = HA.class_of(x)
            xp = HA.reps * (self.Pinv * a)
            z = y - G.gamma_bar(S.r, i - 1) * xp
        else:
            z = y
        return HQ.class_of(z)

    def round_trips(self):
        """(backward o forward = id, forward o backward = id on F^1)."""
        S, i = self.S, self.i
        HQ, HT = S.Q.cohomology(i - 1), S.T.cohomology(i)
        if HQ.dim == 0:
            return True, self.forward.ncols() == 0
        ys = S.cochain(i, y=HQ.reps)
        left = self.backward(ys) == la.eye(HQ.dim)
        reps = HT.reps * self.forward if HT.dim else la.zeros(S.T.dim(i), HQ.dim)
        back = self.backward(reps)
        right = self.forward * back == self.forward
        return left, right and la.rank(self.forward) == HQ.dim


def f1_inverse(S: SynComplex, i):
    G = S.G
    A = G.C_an
    M = G.P_of_Phi_map(S.P).on_cohomology(i - 1)
    HA = A.cohomology(i - 1)
    if HA.dim and la.rank(M) < HA.dim:
        k = la.nullspace(M)
        raise NotInvertible("P(Phi) is not invertible on H^%d(C_an)" % (i - 1),
                            HA.reps * la.columns(k, [0]))
    Pinv = la.inverse(M) if HA.dim else la.zeros(0, 0)
    HQ, HT = S.Q.cohomology(i - 1), S.T.cohomology(i)
    if HQ.dim and HT.dim:
        forward = HT.class_of(S.cochain(i, y=HQ.reps))
    else:
        forward = la.zeros(HT.dim, HQ.dim)
    F0prev = f_filtration(S, i - 1, check_e2=False).F0 == 0
    return F1Inverse(S, i, forward, Pinv, F0prev)


# -- monodromy cones and the Hyodo-Kato sequence -----------------------------------

@dataclass
class AbsComplex:
    complex: object
    phi: ChainMap
    package: GeometricPackage


def abs_cone(G: GeometricPackage):
    """Cone(N)^q = C^{q+1} ⊕ C^q with Frobenius Phi on the source and p Phi on the target."""
    if G.mono is None:
        raise PackageError("package has no monodromy operator", "N")
    C = cone(G.mono)
    A = G.C_an
    mats = {}
    for q in C.degrees:
        mats[q] = la.block([[G.phi.at(q + 1), None], [None, G.phi.at(q) * G.p]],
                           [A.dim(q + 1), A.dim(q)], [A.dim(q + 1), A.dim(q)])
    try:
        phi = ChainMap(C, C, mats)
    except ValueError:
        raise PackageError("Frobenius on the cone is not a chain map (N Phi != p Phi N)", "N") from None
    return AbsComplex(C, phi, G)


@dataclass
class HKSequence:
    i: int
    coker_dim: int
    abs_dim: int
    ker_dim: int
    inclusion: object   # H^{i-1}(C) -> H^{i-1}_abs, kills N H^{i-1}
    projection: object  # H^{i-1}_abs -> H^i(C), lands in ker N
    exact: bool
    equivariant: bool

    def as_dict(self):
        return {"i": self.i, "coker": self.coker_dim, "abs": self.abs_dim, "ker": self.ker_dim,
                "exact": self.exact, "equivariant": self.equivariant}


def hk_exact_sequence(G: GeometricPackage, i):
    """0 -> H^{i-1}(-1)/N -> H^{i-1}_abs -> H^i{}^{N=0} -> 0, checked by ranks and Frobenius."""
    ab = abs_cone(G)
    C, A = ab.complex, G.C_an
    j = i - 1
    Hj, Hi, Hab = A.cohomology(j), A.cohomology(i), C.cohomology(j)
    Nj, Ni = G.mono.on_cohomology(j), G.mono.on_cohomology(i)

    def embed_target(b):
        out = la.zeros(C.dim(j), b.ncols())
        if A.dim(j):
            la.set_block(out, A.dim(j + 1), 0, b)
        return out

    inc = Hab.class_of(embed_target(Hj.reps)) if Hj.dim and Hab.dim else la.zeros(Hab.dim, Hj.dim)
    if Hab.dim and A.dim(i):
        prj = Hi.class_of(la.get_block(Hab.reps, 0, A.dim(i), 0, Hab.dim))
    else:
        prj = la.zeros(Hi.dim, Hab.dim)
    coker = Hj.dim - la.rank(Nj)
    ker = Hi.dim - la.rank(Ni)
    exact = (la.is_zero(inc * Nj) and la.rank(inc) == coker
             and la.is_zero(Ni * prj) and la.rank(prj) == ker
             and la.is_zero(prj * inc) and la.rank(inc) + la.rank(prj) == Hab.dim)
    Fab = ab.phi.on_cohomology(j)
    Fj = G.phi.on_cohomology(j) * G.p
    Fi = G.phi.on_cohomology(i)
    equiv = inc * Fj == Fab * inc and prj * Fab == Fi * prj
    return HKSequence(i, coker, Hab.dim, ker, inc, prj, exact, equiv)
