"""Truncated rings O_{n,r} = Z_p[Z, T]/(Z_i^n - p T_i) and inversion of P(Phi) on mM.

Elements are sparse maps  (a, b) -> coefficient  for the monomial Z^a T^b with
0 <= a_i < n (the Z_p-basis of O_{n,r}).  Truncation is by weight
|a| + n |b| > D, the grading that makes Z^n = pT homogeneous; precision is
p^M relative to the integral lattice.  Coefficients are Fractions, so elements
of M = M0[1/p] may carry p-power denominators.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .scalars import Poly


class PrecisionExhausted(ArithmeticError):
    pass


class NotInIdeal(ValueError):
    pass


def valuation(c, p):
    c = Fraction(c)
    if c == 0:
        return None
    v, num, den = 0, c.numerator, c.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class TruncRing:
    p: int
    n: int
    r: int
    M: int
    D: int

    def __post_init__(self):
        if self.n < 1 or self.r < 1 or self.M < 1 or self.D < 0:
            raise ValueError("need n, r, M >= 1 and D >= 0")

    # -- coefficients --------------------------------------------------
    def reduce_coeff(self, c):
        """Canonical representative of c modulo p^M Z_(p)."""
        c = Fraction(c)
        v = valuation(c, self.p)
        if v is None or v >= self.M:
            return Fraction(0)
        e = min(v, 0)
        x = c * Fraction(self.p) ** (-e)
        mod = self.p ** (self.M - e)
        k = x.numerator * pow(x.denominator, -1, mod) % mod
        return Fraction(k, self.p ** (-e))

    # -- monomials -----------------------------------------------------
    def weight(self, mono):
        a, b = mono
        return sum(a) + self.n * sum(b)

    def basis(self):
        """All reduced monomials of weight <= D."""
        out = []
        for a in product(range(self.n), repeat=self.r):
            wa = sum(a)
            if wa > self.D:
                continue
            rest = (self.D - wa) // self.n
            for b in product(range(rest + 1), repeat=self.r):
                if wa + self.n * sum(b) <= self.D:
                    out.append((a, b))
        return sorted(out, key=lambda m: (self.weight(m), m))

    def _normal(self, a, b):
        """Z^a T^b for arbitrary a -> (p-power, reduced monomial)."""
        e, a2, b2 = 0, [], list(b)
        for i, ai in enumerate(a):
            qt, s = divmod(ai, self.n)
            e += qt
            a2.append(s)
            b2[i] += qt
        return e, (tuple(a2), tuple(b2))

    # -- elements ------------------------------------------------------
    def elem(self, terms=None, exact=False):
        out = {}
        for (a, b), c in (terms or {}).items():
            e, mono = self._normal(tuple(a), tuple(b))
            if self.weight(mono) > self.D:
                continue
            out[mono] = out.get(mono, 0) + Fraction(c) * self.p ** e
        return self.clean(out, exact)

    def clean(self, x, exact=False):
        if exact:
            return {k: v for k, v in x.items() if v != 0}
        out = {}
        for k, v in x.items():
            v = self.reduce_coeff(v)
            if v:
                out[k] = v
        return out

    def zero(self):
        return {}

    def one(self):
        return self.elem({((0,) * self.r, (0,) * self.r): 1})

    def Z(self, i):
        a = [0] * self.r
        a[i] = 1
        return self.elem({(tuple(a), (0,) * self.r): 1})

    def T(self, i):
        b = [0] * self.r
        b[i] = 1
        return self.elem({((0,) * self.r, tuple(b)): 1})

    def add(self, x, y, exact=True):
        out = dict(x)
        for k, v in y.items():
            out[k] = out.get(k, 0) + v
        return self.clean(out, exact)

    def sub(self, x, y, exact=True):
        return self.add(x, self.scale(y, -1), exact)

    def scale(self, x, c):
        c = Fraction(c)
        return {k: v * c for k, v in x.items() if v * c != 0}

    def mul(self, x, y, exact=True):
        out = {}
        for (a1, b1), u in x.items():
            for (a2, b2), v in y.items():
                e, mono = self._normal(tuple(i + j for i, j in zip(a1, a2)),
                                       tuple(i + j for i, j in zip(b1, b2)))
                if self.weight(mono) > self.D:
                    continue
                out[mono] = out.get(mono, 0) + u * v * self.p ** e
        return self.clean(out, exact)

    def pow(self, x, k):
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def phi(self, x, exact=True):
        """Z_i -> Z_i^p, T_i -> p^(p-1) T_i^p; trivial on the base (f = 1)."""
        p = self.p
        out = {}
        for (a, b), c in x.items():
            e, mono = self._normal(tuple(p * i for i in a), tuple(p * j for j in b))
            if self.weight(mono) > self.D:
                continue
            out[mono] = out.get(mono, 0) + c * p ** (e + (p - 1) * sum(b))
        return self.clean(out, exact)

    def augmentation(self, x):
        return x.get(((0,) * self.r, (0,) * self.r), Fraction(0))

    def t_degree(self, x):
        """Minimal |b| over the support (None for zero)."""
        return min((sum(b) for (_, b) in x), default=None)

    def is_integral(self, x):
        return all(valuation(c, self.p) >= 0 for c in x.values())

    def equal(self, x, y):
        return not self.clean(self.sub(x, y), exact=False)


class TruncPadicModule:
    """Free O_{n,r}-module of rank k with phi-semilinear Phi0(e_j) = sum_i A_ij e_i."""

    def __init__(self, ring: TruncRing, phi_matrix):
        self.ring = ring
        self.k = len(phi_matrix)
        self.A = [[ring.elem(e) for e in row] for row in phi_matrix]
        if any(len(row) != self.k for row in self.A):
            raise ValueError("phi matrix must be square")
        for row in self.A:
            for e in row:
                if not ring.is_integral(e):
                    raise ValueError("Phi0 must be integral")

    def zero(self):
        return [{} for _ in range(self.k)]

    def add(self, u, v, exact=True):
        return [self.ring.add(a, b, exact) for a, b in zip(u, v)]

    def sub(self, u, v, exact=True):
        return [self.ring.sub(a, b, exact) for a, b in zip(u, v)]

    def scale(self, u, c):
        return [self.ring.scale(a, c) for a in u]

    def Phi(self, v, exact=True):
        R = self.ring
        fv = [R.phi(x) for x in v]
        out = []
        for i in range(self.k):
            acc = {}
            for j in range(self.k):
                if fv[j] and self.A[i][j]:
                    acc = R.add(acc, R.mul(self.A[i][j], fv[j]))
            out.append(R.clean(acc, exact))
        return out

    def poly_apply(self, P, v, exact=True):
        """P(Phi)(v) by Horner."""
        coeffs = list(P)
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.Phi(acc), self.scale(v, c))
        return [self.ring.clean(a, exact) for a in acc]

    def reduce(self, v):
        return [self.ring.clean(a, exact=False) for a in v]

    def equal(self, u, v):
        return all(not x for x in self.reduce(self.sub(u, v)))

    def in_m(self, v):
        return all(self.ring.augmentation(a) == 0 for a in v)

    def t_degree(self, v):
        ds = [self.ring.t_degree(a) for a in v if a]
        return min(ds, default=None)

    def m_basis(self):
        """Monomial basis of mM0 (nonconstant monomials times e_j)."""
        out = []
        for mono in self.ring.basis():
            if self.ring.weight(mono) == 0:
                continue
            for j in range(self.k):
                v = self.zero()
                v[j] = {mono: Fraction(1)}
                out.append(v)
        return out


def denominator_exponent(P: Poly, p):
    """Least h >= 0 with p^h Q integral, where P = 1 + Q."""
    h = 0
    for c in list(P)[1:]:
        v = valuation(c, p)
        if v is not None:
            h = max(h, -v)
    return h


@dataclass
class InversionReport:
    y: list
    m: int
    h: int
    finite_terms: int
    series_terms: int
    residual_zero: bool


def p_phi_invert(M0: TruncPadicModule, P, target, report=False):
    """y in mM with P(Phi)(y) = target modulo (p^M, weight > D)."""
    P = P if isinstance(P, Poly) else Poly(P)
    if P.degree < 0 or P[0] != 1:
        raise ValueError("P must have constant term 1")
    if not M0.in_m(target):
        raise NotInIdeal("target is not in mM (nonzero augmentation)")
    R = M0.ring
    Q = Poly([0] + list(P)[1:])
    h = denominator_exponent(P, R.p)
    m = h + 1
    N = 2 * m * M0.ring.n * M0.ring.r

    def negQ(v):
        return M0.scale(M0.poly_apply(Q, v), -1)

    # mM/(T)^m M: finite inverse sum_{i<=2mnr} (-Q(Phi))^i
    term, y0 = target, target
    for _ in range(N):
        term = negQ(term)
        if all(not a for a in term):
            break
        y0 = M0.add(y0, term)
    e = M0.sub(M0.poly_apply(P, y0), target)
    d = M0.t_degree(e)
    if d is not None and d < m:
        raise ArithmeticError("nilpotency step failed: residue has T-degree %d < %d" % (d, m))
    # (T)^m M: geometric series, contracting by p at each step
    cap = R.M * (R.D + 1)
    s = M0.reduce(e)
    y1 = s
    k = 0
    while any(s):
        k += 1
        if k > cap:
            raise PrecisionExhausted("geometric series did not vanish by term %d" % k)
        s = M0.reduce(negQ(s))
        y1 = M0.add(y1, s)
    y = M0.sub(y0, y1)
    ok = M0.equal(M0.poly_apply(P, y), target)
    if not ok:
        raise ArithmeticError("residual of P(Phi)(y) - target is nonzero")
    if report:
        return InversionReport(y, m, h, N, k, ok)
    return y


@dataclass
class AutomorphismReport:
    samples: int
    max_residual_forward: int
    max_residual_backward: int
    ok: bool
    failures: list


def _residual_size(M0, u, v):
    """Number of nonzero reduced coefficients of u - v (0 means equal)."""
    return sum(len(a) for a in M0.reduce(M0.sub(u, v)))


def random_m_element(M0: TruncPadicModule, rng, density=0.5, max_coeff=None):
    R = M0.ring
    max_coeff = max_coeff or R.p ** 2
    v = M0.zero()
    for mono in R.basis():
        if R.weight(mono) == 0:
            continue
        for j in range(M0.k):
            if rng.random() < density:
                c = rng.randint(-max_coeff, max_coeff)
                if c:
                    v[j][mono] = Fraction(c)
    return v


def verify_automorphism(M0: TruncPadicModule, P, samples, rng=None, targets=None):
    """Both round trips P(Phi) o inverse and inverse o P(Phi) on random elements of mM."""
    import random as _random
    rng = rng or _random.Random(0)
    P = P if isinstance(P, Poly) else Poly(P)
    ts = list(targets) if targets is not None else [random_m_element(M0, rng) for _ in range(samples)]
    fw = bw = 0
    fails = []
    for idx, t in enumerate(ts):
        y = p_phi_invert(M0, P, t)
        a = _residual_size(M0, M0.poly_apply(P, y), t)
        z = p_phi_invert(M0, P, M0.poly_apply(P, t))
        b = _residual_size(M0, z, t)
        fw, bw = max(fw, a), max(bw, b)
        if a or b:
            fails.append(idx)
    return AutomorphismReport(len(ts), fw, bw, not fails, fails)


def contraction_holds(M0: TruncPadicModule, P):
    """Q(Phi)((T)^m M0) inside p (T)^m M0, checked on monomial generators."""
    P = P if isinstance(P, Poly) else Poly(P)
    R = M0.ring
    m = denominator_exponent(P, R.p) + 1
    Q = Poly([0] + list(P)[1:])
    for v in M0.m_basis():
        if M0.t_degree(v) < m:
            continue
        w = M0.poly_apply(Q, v)
        for a in w:
            for (_, b), c in a.items():
                if sum(b) < m or valuation(c, R.p) < 1:
                    return False
    return True


def nilpotent_mod_T(M0: TruncPadicModule, P):
    """Q(Phi)^(2mnr+1) = 0 on mM/(T)^m M, checked on monomial generators."""
    P = P if isinstance(P, Poly) else Poly(P)
    R = M0.ring
    m = denominator_exponent(P, R.p) + 1
    Q = Poly([0] + list(P)[1:])
    N = 2 * m * R.n * R.r + 1
    for v in M0.m_basis():
        w = v
        for _ in range(N):
            w = M0.poly_apply(Q, w)
            d = M0.t_degree(w)
            if d is None or d >= m:
                break
        d = M0.t_degree(w)
        if d is not None and d < m:
            return False
    return True


def relation_check(R: TruncRing):
    """phi(Z_i^n) = p phi(T_i) and Z_i^n = p T_i in the truncation."""
    for i in range(R.r):
        zn = R.pow(R.Z(i), R.n)
        if not R.equal(zn, R.scale(R.T(i), R.p)):
            return False
        if not R.equal(R.phi(zn), R.scale(R.phi(R.T(i)), R.p)):
            return False
    return True
