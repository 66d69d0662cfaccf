"""Geometric packages: a Frobenius complex, a filtered complex and a comparison map.

Everything is flattened to finite-dimensional Q-vector spaces. When the
unramified base has degree f > 1, the multiplication-by-zeta matrices on
C_an are part of the data and sigma-semilinearity of Phi becomes the checkable
identity Phi Z = Z^p Phi.
"""
from dataclasses import dataclass, field

from .. import linalg as la
from ..homcore import ChainMap, Complex, ConventionError, tensor_total
from ..scalars import cyclotomic_poly


class PackageError(ValueError):
    """Invalid package data; ``where`` names the offending piece and degree."""

    def __init__(self, msg, where=""):
        super().__init__(msg if not where else "%s: %s" % (where, msg))
        self.where = where


class Filtration:
    """Decreasing filtration of a complex by subcomplexes.

    ``levels`` maps r to {q: basis matrix of Fil^r C^q} on a contiguous range
    lo..hi. Below lo the filtration is everything, above hi it is zero.
    """

    def __init__(self, C: Complex, levels=None, check=True):
        self.C = C
        self.levels = {int(r): dict(v) for r, v in (levels or {}).items()}
        rs = sorted(self.levels)
        if rs and rs != list(range(rs[0], rs[-1] + 1)):
            raise PackageError("filtration levels must be contiguous, got %s" % rs, "fil")
        self.lo = rs[0] if rs else 0
        self.hi = rs[-1] if rs else -1
        self._quot = {}
        if check:
            self.check()

    @classmethod
    def trivial(cls, C, jump=0):
        """Fil^r = C for r <= jump and 0 above."""
        return cls(C, {jump: {q: la.eye(C.dim(q)) for q in C.degrees}})

    def basis(self, r, q):
        n = self.C.dim(q)
        if r < self.lo:
            return la.eye(n)
        if r > self.hi:
            return la.zeros(n, 0)
        b = self.levels[r].get(q)
        return la.column_basis(b) if b is not None and b.ncols() else la.zeros(n, 0)

    def check(self):
        C = self.C
        for r in range(self.lo, self.hi + 1):
            for q in C.degrees:
                b = self.basis(r, q)
                if b.nrows() != C.dim(q):
                    raise PackageError("Fil^%d has %d rows, expected %d" % (r, b.nrows(), C.dim(q)),
                                       "fil degree %d" % q)
                if not la.contains(self.basis(r - 1, q), b):
                    raise PackageError("Fil^%d is not contained in Fil^%d" % (r, r - 1), "fil degree %d" % q)
                if not la.contains(self.basis(r, q + 1), C.d(q) * b):
                    raise PackageError("d does not preserve Fil^%d" % r, "fil degree %d" % q)

    def jumps(self):
        return self.lo, self.hi

    def quotient(self, r):
        """(C/Fil^r, proj {q}, lift {q}); lift is a complement basis, proj inverts it."""
        if r not in self._quot:
            C = self.C
            proj, lift, dims = {}, {}, {}
            for q in C.degrees:
                n = C.dim(q)
                F = self.basis(r, q)
                L = la.complement(la.eye(n), F)
                B = la.hstack(F, L, nrows=n)
                Binv = la.inverse(B)
                proj[q] = la.get_block(Binv, F.ncols(), n, 0, n)
                lift[q] = L
                dims[q] = L.ncols()
            diffs = {q: proj[q + 1] * C.d(q) * lift[q]
                     for q in C.degrees if q + 1 in proj and dims[q] and dims[q + 1]}
            Q = Complex(dims, diffs)
            self._quot[r] = (Q, proj, lift)
        return self._quot[r]

    def shifted(self, C_new, level_shift, degree_shift):
        """The filtration r -> Fil^{r - level_shift} on C_new^q = C^{q - degree_shift}."""
        lv = {r + level_shift: {q + degree_shift: b for q, b in v.items()} for r, v in self.levels.items()}
        return Filtration(C_new, lv)


def _as_chain(S, T, mats, what, degree=0):
    try:
        return ChainMap(S, T, dict(mats or {}), degree)
    except ConventionError as e:
        raise PackageError(str(e), what) from None


@dataclass(eq=False)
class GeometricPackage:
    """(C_an, Phi, N) with C_dR filtered and gamma: C_an -> C_dR."""

    C_an: Complex
    Phi: dict
    C_dR: Complex
    fil: Filtration
    gamma: dict
    p: int
    N: dict = None
    d: int = 0
    support: str = "plain"
    f: int = 1
    zeta: dict = None
    name: str = ""
    _poly_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.validate()

    # -- validation --------------------------------------------------------

    def validate(self):
        A, D = self.C_an, self.C_dR
        if self.support not in ("plain", "c"):
            raise PackageError("support must be 'plain' or 'c'", "support")
        self.phi = _as_chain(A, A, self.Phi, "Phi")
        self.gam = _as_chain(A, D, self.gamma, "gamma")
        if self.fil.C is not D:
            if self.fil.C.dims != D.dims:
                raise PackageError("filtration lives on a different complex", "fil")
        self.fil.check()
        if self.N is not None:
            self.mono = _as_chain(A, A, self.N, "N")
            for q in A.degrees:
                if self.mono.at(q) * self.phi.at(q) != self.phi.at(q) * self.mono.at(q) * self.p:
                    raise PackageError("N Phi != p Phi N", "N degree %d" % q)
        else:
            self.mono = None
        if self.f > 1:
            self._check_semilinear()

    def _check_semilinear(self):
        if self.zeta is None:
            raise PackageError("f > 1 needs the zeta action on C_an", "zeta")
        cyc = cyclotomic_poly(self.p ** self.f - 1)
        for q in self.C_an.degrees:
            Z = self.zeta.get(q)
            n = self.C_an.dim(q)
            if Z is None or la.shape(Z) != (n, n):
                raise PackageError("missing or misshaped zeta matrix", "zeta degree %d" % q)
            if not la.is_zero(la.polyval_matrix(cyc, Z)):
                raise PackageError("zeta matrix does not satisfy the cyclotomic polynomial",
                                   "zeta degree %d" % q)
            Zn = self.zeta.get(q + 1)
            if Zn is not None and self.C_an.d(q) * Z != Zn * self.C_an.d(q):
                raise PackageError("differential is not K0-linear", "zeta degree %d" % q)
            Zp = Z ** self.p if n else Z
            if self.phi.at(q) * Z != Zp * self.phi.at(q):
                raise PackageError("Phi is not sigma-semilinear", "Phi degree %d" % q)
            if self.mono is not None and self.mono.at(q) * Z != Z * self.mono.at(q):
                raise PackageError("N is not K0-linear", "N degree %d" % q)

    # -- accessors -----------------------------------------------------------

    @property
    def degrees(self):
        return sorted(set(self.C_an.degrees) | set(self.C_dR.degrees))

    def P_of_Phi(self, P, q):
        key = (tuple(P), q)
        if key not in self._poly_cache:
            self._poly_cache[key] = la.polyval_matrix([la.q(c) for c in P], self.phi.at(q))
        return self._poly_cache[key]

    def P_of_Phi_map(self, P):
        return ChainMap(self.C_an, self.C_an, {q: self.P_of_Phi(P, q) for q in self.C_an.degrees})

    def quotient(self, r):
        return self.fil.quotient(r)

    def gamma_bar(self, r, q):
        Q, proj, _ = self.quotient(r)
        if q not in proj:
            return la.zeros(Q.dim(q), self.C_an.dim(q))
        return proj[q] * self.gam.at(q)

    def top_degree(self):
        return max(self.degrees, default=0)


@dataclass(eq=False)
class PackageMorphism:
    """Degree-0 morphism of packages: commutes with d, Phi and gamma and maps Fil^r into Fil^r."""

    src: GeometricPackage
    tgt: GeometricPackage
    an: dict
    dR: dict
    check: bool = True

    def __post_init__(self):
        self.f_an = _as_chain(self.src.C_an, self.tgt.C_an, self.an, "morphism (an)")
        self.f_dR = _as_chain(self.src.C_dR, self.tgt.C_dR, self.dR, "morphism (dR)")
        if self.check:
            self.validate()

    def validate(self):
        S, T = self.src, self.tgt
        for q in S.C_an.degrees:
            if T.phi.at(q) * self.f_an.at(q) != self.f_an.at(q) * S.phi.at(q):
                raise PackageError("morphism does not commute with Phi", "degree %d" % q)
            if T.gam.at(q) * self.f_an.at(q) != self.f_dR.at(q) * S.gam.at(q):
                raise PackageError("morphism does not commute with gamma", "degree %d" % q)
        lo = min(S.fil.lo, T.fil.lo)
        hi = max(S.fil.hi, T.fil.hi) + 1
        for r in range(lo, hi + 1):
            for q in S.C_dR.degrees:
                if not la.contains(T.fil.basis(r, q), self.f_dR.at(q) * S.fil.basis(r, q)):
                    raise PackageError("morphism does not preserve Fil^%d" % r, "degree %d" % q)

    def on_quotient(self, r, q):
        _, _, lift = self.src.quotient(r)
        _, proj, _ = self.tgt.quotient(r)
        if q not in lift or q not in proj:
            return la.zeros(self.tgt.quotient(r)[0].dim(q), self.src.quotient(r)[0].dim(q))
        return proj[q] * self.f_dR.at(q) * lift[q]


# -- constructions -----------------------------------------------------------

def _tensor_blocks(C1, C2, off, n, f1, f2, off_t=None, dims_t=None, dims_s=None):
    """Matrix of f1 ⊗ f2 on (C1 ⊗ C2)^n using tensor_total offsets."""
    off_t = off_t or off
    out = la.zeros(dims_t(n), dims_s(n))
    for a in C1.degrees:
        b = n - a
        if (a, b) not in off or (a, b) not in off_t:
            continue
        K = la.kron(f1(a), f2(b))
        if K.nrows() and K.ncols():
            la.set_block(out, off_t[(a, b)], off[(a, b)], K)
    return out


def tensor_packages(G1: GeometricPackage, G2: GeometricPackage, name=""):
    """Kunneth package G1 ⊗ G2 and its product maps (identity embeddings).

    Returns (G3, an_mul, dR_mul) with mul[(a, b)] : C3^{a+b} <- C1^a ⊗ C2^b.
    """
    if G1.p != G2.p:
        raise PackageError("tensor of packages over different primes")
    A, offA = tensor_total(G1.C_an, G2.C_an)
    D, offD = tensor_total(G1.C_dR, G2.C_dR)
    Phi = {n: _tensor_blocks(G1.C_an, G2.C_an, offA, n, G1.phi.at, G2.phi.at,
                             dims_t=A.dim, dims_s=A.dim) for n in A.degrees}
    gamma = {n: _tensor_blocks(G1.C_an, G2.C_an, offA, n, G1.gam.at, G2.gam.at,
                               off_t=offD, dims_t=D.dim, dims_s=A.dim) for n in A.degrees}
    N = None
    if G1.mono is not None and G2.mono is not None:
        # N acts as a derivation on the tensor; the Frobenius relation is preserved.
        N = {}
        for n in A.degrees:
            N[n] = (_tensor_blocks(G1.C_an, G2.C_an, offA, n, G1.mono.at, lambda b: la.eye(G2.C_an.dim(b)),
                                   dims_t=A.dim, dims_s=A.dim)
                    + _tensor_blocks(G1.C_an, G2.C_an, offA, n, lambda a: la.eye(G1.C_an.dim(a)), G2.mono.at,
                                     dims_t=A.dim, dims_s=A.dim))
    lo = G1.fil.lo + G2.fil.lo
    hi = G1.fil.hi + G2.fil.hi
    levels = {}
    for r in range(lo, hi + 1):
        levels[r] = {}
        for n in D.degrees:
            cols = []
            for a in G1.C_dR.degrees:
                b = n - a
                if (a, b) not in offD:
                    continue
                for s in range(G1.fil.lo - 1, G1.fil.hi + 2):
                    K = la.kron(G1.fil.basis(s, a), G2.fil.basis(r - s, b))
                    if K.ncols():
                        E = la.zeros(D.dim(n), K.ncols())
                        la.set_block(E, offD[(a, b)], 0, K)
                        cols.append(E)
            levels[r][n] = la.span(*cols, dim=D.dim(n))
    fil = Filtration(D, levels)
    f = max(G1.f, G2.f)
    if f > 1:
        if G1.f != G2.f:
            raise PackageError("tensor of packages over different unramified bases")
        # over K0 the tensor is K0-balanced; the flattened Q-tensor only models f = 1
        raise NotImplementedError("tensor of packages with f > 1 is not modeled")
    G3 = GeometricPackage(A, Phi, D, fil, gamma, G1.p, N=N, d=max(G1.d, G2.d),
                          support="c" if "c" in (G1.support, G2.support) else "plain",
                          name=name or "(%s)⊗(%s)" % (G1.name, G2.name))
    an_mul = {(a, b): _embed(A, offA, a, b, G1.C_an, G2.C_an) for a in G1.C_an.degrees for b in G2.C_an.degrees}
    dR_mul = {(a, b): _embed(D, offD, a, b, G1.C_dR, G2.C_dR) for a in G1.C_dR.degrees for b in G2.C_dR.degrees}
    return G3, an_mul, dR_mul


def _embed(T, off, a, b, C1, C2):
    m = la.zeros(T.dim(a + b), C1.dim(a) * C2.dim(b))
    if (a, b) in off and m.ncols():
        la.set_block(m, off[(a, b)], 0, la.eye(m.ncols()))
    return m


def twist_shift(G: GeometricPackage, name=""):
    """G(-1)[-1]: C^q = G^{q-1} with -d, Frobenius p*Phi, Fil^r = Fil_G^{r-1}.

    This is the shape of the quotient in a residue sequence.
    """
    A, D = G.C_an.shift(-1), G.C_dR.shift(-1)
    Phi = {q + 1: G.phi.at(q) * G.p for q in G.C_an.degrees}
    gamma = {q + 1: G.gam.at(q) for q in G.C_an.degrees}
    N = {q + 1: G.mono.at(q) for q in G.C_an.degrees} if G.mono is not None else None
    fil = G.fil.shifted(D, 1, 1)
    zeta = {q + 1: z for q, z in G.zeta.items()} if G.zeta else None
    return GeometricPackage(A, Phi, D, fil, gamma, G.p, N=N, d=G.d, support=G.support,
                            f=G.f, zeta=zeta, name=name or "%s(-1)[-1]" % G.name)
