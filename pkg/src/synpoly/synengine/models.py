"""Small explicit packages: points, Tate twists, filtered phi-modules, a unit curve
with a marked point, and random generators for property tests."""
from fractions import Fraction

from .. import linalg as la
from ..gen import random_chain_map, random_complex, rmat, rng_of
from ..homcore import Complex
from ..scalars import Poly, bezout_split, charpoly
from .gysin import GysinBundle
from .package import Filtration, GeometricPackage, tensor_packages


def _deg0(n):
    return Complex({0: n})


def phi_module(p, Phi, fil_levels, name="V", N=None):
    """A filtered (phi, N)-module in degree 0 with C_an = C_dR and gamma = id.

    ``fil_levels`` maps r to a basis of Fil^r (contiguous r).
    """
    Phi = Phi if not isinstance(Phi, list) else la.mat(Phi)
    n = Phi.nrows()
    C, D = _deg0(n), _deg0(n)
    fil = Filtration(D, {r: {0: b} for r, b in fil_levels.items()})
    return GeometricPackage(C, {0: Phi}, D, fil, {0: la.eye(n)}, p,
                            N=None if N is None else {0: N}, name=name)


def point(p, name="pt"):
    """K in degree 0, Phi = 1, Fil^0 = everything, Fil^1 = 0."""
    return phi_module(p, la.eye(1), {0: la.eye(1), 1: la.zeros(1, 0)}, name=name, N=la.zeros(1, 1))


def tate(p, n, name=None):
    """Q_p(n): Phi = p^{-n}, Fil^{-n} everything and Fil^{1-n} = 0."""
    return phi_module(p, la.eye(1, la.q(Fraction(1, p ** n)) if n >= 0 else p ** (-n)),
                      {-n: la.eye(1), 1 - n: la.zeros(1, 0)}, name=name or "Q(%d)" % n)


def dual_module(V: GeometricPackage, name=None):
    """Phi^v = (Phi^{-1})^T and Fil^j(V^v) = annihilator of Fil^{1-j}(V)."""
    Phi = V.phi.at(0)
    n = Phi.nrows()
    D = la.inverse(Phi).transpose()
    lv = {}
    for j in range(-V.fil.hi, 2 - V.fil.lo):
        F = V.fil.basis(1 - j, 0)
        lv[j] = la.nullspace(F.transpose()) if F.ncols() else la.eye(n)
    return phi_module(V.p, D, lv, name=name or "%s^v" % V.name)


def evaluation(n):
    """<v, w> = sum v_i w_i as a 1 x n^2 row in kron coordinates."""
    e = la.zeros(1, n * n)
    for i in range(n):
        e[0, i * n + i] = 1
    return e


def random_phi_module(rng, p, rank=None, lo=-1, hi=1):
    """Random invertible Phi with a random decreasing filtration between lo and hi."""
    n = rank or rng.randint(1, 2)
    while True:
        Phi = rmat(rng, n, n, -2, 2)
        if la.det(Phi) != 0:
            break
    levels, cur = {}, la.eye(n)
    for r in range(lo, hi + 2):
        if r > lo and cur.ncols():
            k = rng.randint(0, cur.ncols())
            cur = cur * rmat(rng, cur.ncols(), k) if k else la.zeros(n, 0)
            cur = la.column_basis(cur) if cur.ncols() else cur
        levels[r] = cur if r <= hi else la.zeros(n, 0)
    return phi_module(p, Phi, levels)


# -- the unit curve and its marked point ---------------------------------------------

def unit_curve(p, h1=None, name="curve"):
    """e0 (degree 0), e2 (degree 2), optional H^1 block (a1, b1) with a1 b1 = e2.

    Phi = 1 on e0, p on e2 and ``h1`` (det p) on (a1, b1). Fil^1 = e2 plus a
    line of degree 1 and Fil^2 = 0. Returns (package, m_an, m_dR, trace row).
    """
    h = 0 if h1 is None else 2
    dims = {0: 1, 1: h, 2: 1}
    C, D = Complex(dims), Complex(dims)
    Phi = {0: la.eye(1), 2: la.eye(1, p)}
    line = la.zeros(h, 0)
    if h:
        M, line = h1
        if la.det(M) != p:
            raise ValueError("H^1 Frobenius must have determinant p")
        Phi[1] = M
    fil = Filtration(D, {0: {q: la.eye(n) for q, n in dims.items()},
                         1: {0: la.zeros(1, 0), 1: line, 2: la.eye(1)},
                         2: {q: la.zeros(n, 0) for q, n in dims.items()}})
    gamma = {q: la.eye(n) for q, n in dims.items()}
    N = {q: la.zeros(n, n) for q, n in dims.items()}
    G = GeometricPackage(C, Phi, D, fil, gamma, p, N=N, d=1, name=name)
    mul = {(0, 0): la.eye(1), (0, 2): la.eye(1), (2, 0): la.eye(1)}
    if h:
        mul[(0, 1)] = la.eye(2)
        mul[(1, 0)] = la.eye(2)
        mul[(1, 1)] = la.mat([[0, 1, -1, 0]])
    tr = la.mat([[1]])
    return G, mul, dict(mul), tr


def random_h1(rng, p):
    """A 2x2 Frobenius of determinant p and a random Fil^1 line."""
    while True:
        a, b, c = rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2)
        if a:
            M = la.mat([[a, b], [c, la.q(Fraction(p + b * c, a))]])
            break
    line = rmat(rng, 2, 1, -2, 2)
    if la.is_zero(line):
        line = la.mat([[1], [0]])
    return M, line


def curve_point_bundle(p, h1=None):
    """Curve X with a point F: X' adds f0' in degree 1 with d f0' = e2."""
    G, m_an, m_dR, tr = unit_curve(p, h1)
    F = point(p)
    h = G.C_an.dim(1)
    dims = {0: 1, 1: h + 1, 2: 1}
    dmat = la.zeros(1, h + 1)
    dmat[0, h] = 1
    Cp, Dp = Complex(dims, {1: dmat}), Complex(dims, {1: dmat})
    Phi1 = la.eye(h + 1, p)
    if h:
        la.set_block(Phi1, 0, 0, G.phi.at(1))
    Phip = {0: la.eye(1), 1: Phi1, 2: la.eye(1, p)}
    line = G.fil.basis(1, 1)
    ext = la.zeros(h + 1, 1)
    ext[h, 0] = 1

    def pad(b):
        out = la.zeros(h + 1, b.ncols())
        la.set_block(out, 0, 0, b)
        return out

    fil = Filtration(Dp, {0: {q: la.eye(n) for q, n in dims.items()},
                          1: {0: la.zeros(1, 0), 1: la.hstack(pad(line), ext, nrows=h + 1), 2: la.eye(1)},
                          2: {q: la.zeros(n, 0) for q, n in dims.items()}})
    gam = {q: la.eye(n) for q, n in dims.items()}
    N = {q: la.zeros(n, n) for q, n in dims.items()}
    Gp = GeometricPackage(Cp, Phip, Dp, fil, gam, p, N=N, d=1, name="curve'")
    inc = {0: la.eye(1), 1: pad(la.eye(h)), 2: la.eye(1)}
    res1 = la.zeros(1, h + 1)
    res1[0, h] = 1
    res = {1: res1}
    rest = {0: la.eye(1)}
    mF = {(0, 0): la.eye(1)}
    return GysinBundle(G, Gp, F, {"an": inc, "dR": dict(inc)}, {"an": res, "dR": dict(res)},
                       {"an": rest, "dR": dict(rest)}, (m_an, m_dR), (mF, dict(mF)), tr)


# -- twists by a phi-module -----------------------------------------------------------

def twist(G, V, name=None):
    """G ⊗ V (Kunneth with a degree-0 module)."""
    T, _, _ = tensor_packages(G, V, name=name or "%s⊗%s" % (G.name, V.name))
    return T


def duality_pairing(G, m_an, m_dR, V, Vd=None):
    """Products (G⊗V) ⊗ (G⊗V^v) -> G: m(x ⊗ x') <v, w>. Returns (E, Ed, m_an, m_dR)."""
    Vd = Vd or dual_module(V)
    E, Ed = twist(G, V), twist(G, Vd)
    n = V.C_an.dim(0)
    ev = evaluation(n)

    def lift(C, mul):
        out = {}
        for (a, b), m in mul.items():
            d1, d2 = C.dim(a), C.dim(b)
            M = la.zeros(m.nrows(), d1 * n * d2 * n)
            for i in range(d1):
                for s in range(n):
                    for j in range(d2):
                        for t in range(n):
                            e = ev[0, s * n + t]
                            if not e:
                                continue
                            col = (i * n + s) * (d2 * n) + (j * n + t)
                            for k in range(m.nrows()):
                                v = m[k, i * d2 + j]
                                if v:
                                    M[k, col] = v * e
            out[(a, b)] = M
        return out

    return E, Ed, lift(G.C_an, m_an), lift(G.C_dR, m_dR)


# -- random generators ---------------------------------------------------------------

def random_poly(rng, max_deg=3, lo=-3, hi=3, den=(1, 2, 3)):
    k = rng.randint(0, max_deg)
    cs = [1] + [Fraction(rng.randint(lo, hi), rng.choice(den)) for _ in range(k)]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return Poly(cs)


def _random_subcomplex(rng, C, contain=None, inside=None):
    """Random d-stable subspaces; optionally containing/inside given families of subspaces."""
    out = {}
    for q in C.degrees:
        n = C.dim(q)
        base = inside[q] if inside is not None else la.eye(n)
        k = rng.randint(0, base.ncols())
        gens = base * rmat(rng, base.ncols(), k) if k else la.zeros(n, 0)
        if contain is not None:
            gens = la.hstack(gens, contain[q], nrows=n)
        out[q] = gens
    # close under d, from low degree up
    for q in C.degrees:
        if q + 1 in out:
            out[q + 1] = la.hstack(out[q + 1], C.d(q) * out[q], nrows=C.dim(q + 1))
    return {q: (la.column_basis(b) if b.ncols() else b) for q, b in out.items()}


def random_filtration(rng, D, lo=0, hi=1, contain=None):
    """Decreasing filtration with Fil^lo = D, levels built top down; ``contain`` = {r: {q: basis}}."""
    levels = {}
    prev = None
    for r in range(hi + 1, lo - 1, -1):
        if r == lo:
            sub = {q: la.eye(D.dim(q)) for q in D.degrees}
        elif r == hi + 1:
            sub = {q: la.zeros(D.dim(q), 0) for q in D.degrees}
        else:
            sub = _random_subcomplex(rng, D, contain=prev)
        if contain and r in contain:
            sub = {q: la.column_basis(la.hstack(sub[q], contain[r][q], nrows=D.dim(q)))
                   if sub[q].ncols() + contain[r][q].ncols() else sub[q] for q in D.degrees}
            sub = _close(D, sub)
        levels[r] = sub
        prev = sub
    return Filtration(D, levels)


def _close(D, sub):
    for q in D.degrees:
        if q + 1 in sub:
            sub[q + 1] = la.hstack(sub[q + 1], D.d(q) * sub[q], nrows=D.dim(q + 1))
            if sub[q + 1].ncols():
                sub[q + 1] = la.column_basis(sub[q + 1])
    return sub


def random_package(seed=None, p=None, max_deg=2, max_dim=3, fil_range=(0, 1), gamma_in=None):
    """Random package over Q_p (f = 1). ``gamma_in = r`` forces gamma(C_an) into Fil^r."""
    rng = rng_of(seed)
    p = p or rng.choice([2, 3, 5])
    for _ in range(50):
        A = random_complex(rng, 0, max_deg, max_dim)
        if A.degrees:
            break
    D = random_complex(rng, 0, max_deg, max_dim)
    Phi = random_chain_map(rng, A, A)
    gam = random_chain_map(rng, A, D)
    lo, hi = fil_range
    contain = None
    if gamma_in is not None:
        img = {q: la.column_basis(gam.at(q)) if gam.at(q).ncols() else la.zeros(D.dim(q), 0)
               for q in D.degrees}
        contain = {r: img for r in range(lo, gamma_in + 1)}
    fil = random_filtration(rng, D, lo, hi, contain)
    return GeometricPackage(A, {q: Phi.at(q) for q in A.degrees}, D, fil,
                            {q: gam.at(q) for q in A.degrees}, p, name="random")


def random_phi_N_package(seed=None, p=None, max_deg=2, max_dim=2):
    """C = A ⊗ W with A a random complex and W a (phi, N)-module built from Jordan strings.

    On a string e_0..e_k: N e_j = e_{j+1} and Phi e_j = alpha p^{-j} e_j, so N Phi = p Phi N.
    """
    rng = rng_of(seed)
    p = p or rng.choice([2, 3, 5])
    A = random_complex(rng, 0, max_deg, max_dim, min_dim=1)
    blocks = []
    for _ in range(rng.randint(1, 2)):
        k = rng.randint(1, 2)
        alpha = la.q(Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2])))
        blocks.append((k, alpha))
    m = sum(k for k, _ in blocks)
    Pw, Nw = la.zeros(m, m), la.zeros(m, m)
    o = 0
    for k, alpha in blocks:
        for j in range(k):
            Pw[o + j, o + j] = alpha / la.q(p) ** j
            if j + 1 < k:
                Nw[o + j + 1, o + j] = 1
        o += k
    # random change of basis keeps the relation
    while True:
        B = rmat(rng, m, m, -2, 2)
        if la.det(B) != 0:
            break
    Bi = la.inverse(B)
    Pw, Nw = B * Pw * Bi, B * Nw * Bi
    W = Complex({0: m})
    D = Complex({q: A.dim(q) * m for q in A.degrees},
                {q: la.kron(A.d(q), la.eye(m)) for q in A.degrees})
    Phi = {q: la.kron(la.eye(A.dim(q)), Pw) for q in A.degrees}
    N = {q: la.kron(la.eye(A.dim(q)), Nw) for q in A.degrees}
    fil = Filtration.trivial(D, 0)
    return GeometricPackage(D, Phi, D, fil, {q: la.eye(D.dim(q)) for q in D.degrees}, p, N=N, name="phiN")


def annihilating_poly(G, q):
    """Constant-term-1 polynomial killing Phi on the invertible part of H^q(C_an), or None."""
    M = G.phi.on_cohomology(q)
    if M.nrows() == 0:
        return None
    cp = charpoly([[la.to_fraction(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())])
    while cp and cp[0] == 0:
        cp = cp[1:]
    if len(cp) <= 1:
        return None
    return Poly([c / cp[0] for c in cp])


def random_syn_poly(rng, G, max_deg=3, p_annihilate=0.6):
    """Either a random polynomial or (with probability ``p_annihilate``) one killing Phi on some H^q."""
    if rng.random() < p_annihilate:
        qs = [q for q in G.C_an.degrees if G.C_an.h(q)]
        rng.shuffle(qs)
        for q in qs:
            P = annihilating_poly(G, q)
            if P is not None and P.degree <= max_deg:
                return P
    return random_poly(rng, max_deg)


def random_pairing_setup(seed=None, p=None, max_deg=1, max_dim=2, both_lam=True):
    """(G1, G2, G3, m_an, m_dR, P1, P2, r1, r2) with G3 = G1 ⊗ G2 and identity products.

    With ``both_lam`` gamma_i(C_an_i) lies in Fil^{r_i}, so both lam = 0 and 1 are defined.
    """
    rng = rng_of(seed)
    p = p or rng.choice([2, 3, 5])
    r1, r2 = rng.randint(0, 1), rng.randint(0, 1)
    G1 = random_package(rng, p, max_deg, max_dim, (0, 1), gamma_in=r1 if both_lam else None)
    G2 = random_package(rng, p, max_deg, max_dim, (0, 1), gamma_in=r2 if both_lam else None)
    G3, m_an, m_dR = tensor_packages(G1, G2)
    P1, P2 = random_syn_poly(rng, G1, 2), random_syn_poly(rng, G2, 2)
    return G1, G2, G3, m_an, m_dR, P1, P2, r1, r2


def random_gysin_bundle(seed=None):
    rng = rng_of(seed)
    p = rng.choice([2, 3, 5])
    h1 = random_h1(rng, p) if rng.random() < 0.6 else None
    return curve_point_bundle(p, h1)


def standard_split(P1, P2, variant="x2"):
    return bezout_split(P1, P2, variant)
