"""Exact scalar fields and polynomial algebra.

Coefficients are any exact field elements supporting + - * / and == 0:
``Fraction`` for the rationals, ``CycElt`` for the cyclotomic model of K0.
Nothing here ever extracts a root.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional


# -- univariate polynomial helpers (constant term first) --------------------

def _strip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(a, b):
    n = max(len(a), len(b))
    return _strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    return padd(a, [-x for x in b])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _strip(out)


def pscale(a, c):
    return _strip([c * x for x in a])


def pdivmod(a, b):
    """Euclidean division over a field; b must be nonzero."""
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = list(_strip(a))
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    qt = [0] * (len(a) - db)
    lc = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * _inv(lc)
        qt[k] = c
        if c != 0:
            for i, y in enumerate(b):
                a[k + i] = a[k + i] - c * y
    return _strip(qt), _strip(a[:db])


def pgcd(a, b):
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    return pscale(a, _inv(a[-1]))


def _inv(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def psubs_scale(a, c):
    """a(c X)."""
    out, cp = [], 1
    for x in a:
        out.append(x * cp)
        cp = cp * c
    return _strip(out)


def psubs_power(a, m):
    """a(X^m)."""
    if not a:
        return []
    out = [0] * ((len(a) - 1) * m + 1)
    for i, x in enumerate(a):
        out[i * m] = x
    return out


def pdeg(a):
    """Degree; the zero polynomial has degree -1 (sentinel)."""
    return len(_strip(a)) - 1


def preverse(a, n=None):
    """X^n a(1/X)."""
    a = _strip(a)
    n = len(a) - 1 if n is None else n
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        out[n - i] = x
    return _strip(out)


def cyclotomic_poly(n):
    """Integer coefficients of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = pdivmod([Fraction(x) for x in num], [Fraction(x) for x in cyclotomic_poly(d)])[0]
    return [int(x) for x in num]


def euler_phi(n):
    out, m, k = n, n, 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            out -= out // k
        k += 1
    if m > 1:
        out -= out // m
    return out


class Poly:
    """Immutable univariate polynomial, coefficients constant term first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = tuple(_strip(coeffs))

    @classmethod
    def from_roots_inverse(cls, alphas):
        """prod (1 - a X)."""
        return reduce(lambda acc, a: acc * cls([1, -a]), alphas, cls([1]))

    @property
    def degree(self):
        return len(self.c) - 1

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, o):
        o = o if isinstance(o, Poly) else Poly([o])
        return Poly(padd(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, o):
        o = o if isinstance(o, Poly) else Poly([o])
        return Poly(psub(self.c, o.c))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Poly):
            return Poly(pmul(self.c, o.c))
        return Poly(pscale(self.c, o))

    __rmul__ = __mul__

    def __divmod__(self, o):
        a, b = pdivmod(self.c, o.c)
        return Poly(a), Poly(b)

    def __call__(self, x):
        return peval(self.c, x)

    def scale_var(self, c):
        return Poly(psubs_scale(self.c, c))

    def subs_power(self, m):
        return Poly(psubs_power(self.c, m))

    def monic(self):
        return Poly(pscale(self.c, _inv(self.c[-1])))

    def __repr__(self):
        return "Poly(%s)" % ", ".join(str(x) for x in self.c)


class Poly2:
    """Bivariate polynomial stored as {(i, j): coeff} for X1^i X2^j."""

    __slots__ = ("t",)

    def __init__(self, terms=None):
        self.t = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def in_x1(cls, p):
        return cls({(i, 0): c for i, c in enumerate(p)})

    @classmethod
    def in_x2(cls, p):
        return cls({(0, j): c for j, c in enumerate(p)})

    def __add__(self, o):
        out = dict(self.t)
        for k, v in o.t.items():
            out[k] = out.get(k, 0) + v
        return Poly2(out)

    def __neg__(self):
        return Poly2({k: -v for k, v in self.t.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, Poly2):
            return Poly2({k: v * o for k, v in self.t.items()})
        out = {}
        for (a, b), u in self.t.items():
            for (c, d), v in o.t.items():
                out[(a + c, b + d)] = out.get((a + c, b + d), 0) + u * v
        return Poly2(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Poly2) and self.t == o.t

    def is_zero(self):
        return not self.t

    def deg_x1(self):
        return max((i for i, _ in self.t), default=-1)

    def deg_x2(self):
        return max((j for _, j in self.t), default=-1)

    def subs_scale(self, c1, c2=1):
        """p(c1 X1, c2 X2)."""
        return Poly2({(i, j): v * c1 ** i * c2 ** j for (i, j), v in self.t.items()})

    def __call__(self, x1, x2):
        return sum((v * x1 ** i * x2 ** j for (i, j), v in self.t.items()), 0)

    def __repr__(self):
        return "Poly2(%r)" % dict(sorted(self.t.items()))


# -- the cyclotomic model of K0 -------------------------------------------

class BaseFieldK0:
    """Q(zeta) with zeta a primitive (p^f - 1)-th root of unity and sigma: zeta -> zeta^p.

    For f = 1 the field is the rationals (elements are Fractions, sigma = id).
    """

    def __init__(self, p, f=1):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise ValueError("p must be prime")
        if f < 1:
            raise ValueError("f must be positive")
        self.p, self.f = p, f
        if f == 1:
            self.N, self.modulus, self.dim = 1, None, 1
        else:
            self.N = p ** f - 1
            self.modulus = [Fraction(c) for c in cyclotomic_poly(self.N)]
            self.dim = len(self.modulus) - 1

    def __eq__(self, o):
        return isinstance(o, BaseFieldK0) and (o.p, o.f) == (self.p, self.f)

    def __hash__(self):
        return hash((self.p, self.f))

    def __repr__(self):
        return "BaseFieldK0(p=%d, f=%d)" % (self.p, self.f)

    def __call__(self, x):
        if self.f == 1:
            if isinstance(x, CycElt):
                raise TypeError("cyclotomic element in the rational model")
            return Fraction(x)
        if isinstance(x, CycElt):
            if x.K != self:
                raise TypeError("element of another field")
            return x
        if isinstance(x, (list, tuple)):
            return CycElt(self, x)
        return CycElt(self, [x])

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def zeta(self):
        if self.f == 1:
            return Fraction(1)
        return CycElt(self, [0, 1])

    def sigma(self, x, k=1):
        """sigma^k(x)."""
        if self.f == 1 or not isinstance(x, CycElt):
            return x
        k %= self.f
        if k == 0:
            return x
        e = pow(self.p, k, self.N)
        out = [Fraction(0)] * (self.dim + (self.dim - 1) * e + 1)
        for i, c in enumerate(x.c):
            if c:
                out[(i * e) % self.N] += c
        return CycElt(self, out)

    def coords(self, x):
        if self.f == 1:
            return [Fraction(x)]
        x = self(x)
        return list(x.c) + [Fraction(0)] * (self.dim - len(x.c))

    def from_coords(self, cs):
        return Fraction(cs[0]) if self.f == 1 else CycElt(self, cs)


class CycElt:
    __slots__ = ("K", "c")

    def __init__(self, K, coeffs):
        self.K = K
        c = [Fraction(x) for x in coeffs]
        if len(c) > K.dim:
            c = pdivmod(c, K.modulus)[1]
        self.c = tuple(_strip(c))

    def _lift(self, o):
        if isinstance(o, CycElt):
            if o.K != self.K:
                raise TypeError("mixed fields")
            return o
        if isinstance(o, (int, Fraction)):
            return CycElt(self.K, [o])
        return NotImplemented

    def __add__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return CycElt(self.K, padd(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.K, [-x for x in self.c])

    def __sub__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return CycElt(self.K, psub(self.c, o.c))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return CycElt(self.K, pmul(self.c, o.c))

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[x] against the cyclotomic modulus
        r0, r1 = list(self.K.modulus), list(self.c)
        s0, s1 = [], [Fraction(1)]
        while pdeg(r1) > 0:
            qt, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(qt, s1))
        return CycElt(self.K, pscale(s1, 1 / r1[0]))

    def __truediv__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, b = CycElt(self.K, [1]), self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __eq__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return False
        return self.c == o.c

    def __hash__(self):
        return hash(self.c) if len(self.c) > 1 else hash(self.c[0] if self.c else 0)

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        return "CycElt(%s)" % ", ".join(str(x) for x in self.c)


class RamifiedExtension:
    """K = K0[y]/(E(y)), E monic of degree e over K0."""

    def __init__(self, base: BaseFieldK0, E):
        E = [base(x) for x in E]
        if not E or E[-1] != 1:
            raise ValueError("E must be monic")
        if len(E) < 2:
            raise ValueError("E must have degree >= 1")
        self.base, self.E, self.e = base, E, len(E) - 1

    def __call__(self, coeffs):
        if not isinstance(coeffs, (list, tuple)):
            coeffs = [coeffs]
        c = [self.base(x) for x in coeffs]
        if len(c) > self.e:
            c = pdivmod(c, self.E)[1]
        return tuple(c) + (self.base.zero(),) * (self.e - len(c))

    def mul(self, a, b):
        return self(pmul(list(a), list(b)))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mult_matrix(self, a):
        cols = [self.mul(a, self([0] * k + [1])) for k in range(self.e)]
        return [[cols[j][i] for j in range(self.e)] for i in range(self.e)]

    def trace(self, a):
        m = self.mult_matrix(a)
        return sum((m[i][i] for i in range(self.e)), self.base.zero())


# -- matrices over generic fields (lists of lists) -----------------------

def g_eye(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def g_matmul(A, B):
    if not A:
        return []
    m, k, n = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(k)), 0) for j in range(n)] for i in range(m)]


def g_add(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def g_scale(A, c):
    return [[c * x for x in r] for r in A]


def g_is_zero(A):
    return all(x == 0 for r in A for x in r)


def g_kron(A, B):
    m, n, r, s = len(A), len(A[0]) if A else 0, len(B), len(B[0]) if B else 0
    return [[A[i // r][j // s] * B[i % r][j % s] for j in range(n * s)] for i in range(m * r)]


def g_power(A, k):
    out = g_eye(len(A))
    for _ in range(k):
        out = g_matmul(out, A)
    return out


def g_polyval(coeffs, A):
    n = len(A)
    out = [[0] * n for _ in range(n)]
    for c in reversed(list(coeffs)):
        out = g_add(g_matmul(out, A), g_scale(g_eye(n), c))
    return out


def g_det(A):
    """Gaussian elimination over a field."""
    A = [list(r) for r in A]
    n = len(A)
    d = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            d = -d
        d = d * A[k][k]
        inv = _inv(A[k][k])
        for i in range(k + 1, n):
            if A[i][k] != 0:
                c = A[i][k] * inv
                for j in range(k, n):
                    A[i][j] = A[i][j] - c * A[k][j]
    return d


def charpoly(A):
    """det(X - A), constant term first, by the division-free Berkowitz recursion."""
    n = len(A)
    if n == 0:
        return [1]
    desc = [1, -A[0][0]]
    for k in range(1, n):
        Ak = [row[:k] for row in A[:k]]
        R = A[k][:k]
        C = [A[i][k] for i in range(k)]
        t = [1, -A[k][k]]
        v = C
        for _ in range(k):
            t.append(-sum((R[i] * v[i] for i in range(k)), 0))
            v = [sum((Ak[i][j] * v[j] for j in range(k)), 0) for i in range(k)]
        desc = [sum((t[i - j] * desc[j] for j in range(min(i, len(desc) - 1) + 1)), 0)
                for i in range(k + 2)]
    return list(reversed(desc))


def companion(monic):
    """Companion matrix of a monic polynomial (constant term first)."""
    n = len(monic) - 1
    C = [[0] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = 1
    for i in range(n):
        C[i][n - 1] = -monic[i]
    return C


def semilinear_power(A, K: BaseFieldK0, m):
    """Matrix of Phi^m for Phi(e_j) = sum_i A_ij e_i, Phi sigma-semilinear."""
    out = g_eye(len(A))
    for k in range(m):
        out = g_matmul(out, [[K.sigma(x, k) for x in r] for r in A])
    return out


# -- composed products and splittings ----------------------------------

def _check_ct1(P):
    P = P if isinstance(P, Poly) else Poly(P)
    if P.degree < 0 or P[0] != 1:
        raise ValueError("polynomial must have constant term 1, got %r" % (P,))
    return P


def composed_product(P1, P2):
    """prod over inverse-root pairs of (1 - a1 a2 X), via a Kronecker product of companions."""
    P1, P2 = _check_ct1(P1), _check_ct1(P2)
    if P1.degree == 0 or P2.degree == 0:
        return Poly([1])
    C1 = companion(preverse(P1.c))
    C2 = companion(preverse(P2.c))
    chi = charpoly(g_kron(C1, C2))
    return Poly(preverse(chi, len(chi) - 1))


def resultant(A, B):
    """Sylvester determinant of two univariate polynomials."""
    A, B = _strip(A), _strip(B)
    m, n = len(A) - 1, len(B) - 1
    if m < 0 or n < 0:
        return 0
    size = m + n
    if size == 0:
        return 1
    S = []
    for i in range(n):
        row = [0] * size
        for k, c in enumerate(reversed(A)):
            row[i + k] = c
        S.append(row)
    for i in range(m):
        row = [0] * size
        for k, c in enumerate(reversed(B)):
            row[i + k] = c
        S.append(row)
    return g_det(S)


def interpolate(xs, ys):
    """Newton interpolation; returns coefficients constant term first."""
    n = len(xs)
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / Fraction(xs[i] - xs[i - j])
    out = [dd[-1]]
    for i in range(n - 2, -1, -1):
        out = padd(pmul(out, [-xs[i], 1]), [dd[i]])
    return _strip(out)


def composed_product_resultant(P1, P2):
    """Independent route: chi(X) = Res_Y(R1(Y), Y^n2 R2(X/Y)) sampled and interpolated."""
    P1, P2 = _check_ct1(P1), _check_ct1(P2)
    if P1.degree == 0 or P2.degree == 0:
        return Poly([1])
    R1, R2 = preverse(P1.c), preverse(P2.c)
    n1, n2 = len(R1) - 1, len(R2) - 1
    N = n1 * n2
    xs = list(range(N + 1))
    ys = []
    for x in xs:
        B = [R2[n2 - j] * Fraction(x) ** (n2 - j) for j in range(n2 + 1)]
        ys.append(resultant(R1, B))
    chi = interpolate(xs, ys)
    return Poly(preverse(chi, N))


def _div_in_x2(F: Poly2, P2):
    """F = Q * P2(X2) + R with deg_X2 R < deg P2; coefficients are polys in X1."""
    n2 = len(P2) - 1
    byj = {}
    for (i, j), v in F.t.items():
        byj.setdefault(j, {})[i] = v
    qt = {}
    top = max(byj, default=-1)
    lc = P2[-1]
    for j in range(top, n2 - 1, -1):
        row = byj.pop(j, {})
        for i, v in row.items():
            c = v * _inv(lc)
            qt[(i, j - n2)] = qt.get((i, j - n2), 0) + c
            for k in range(n2):
                if P2[k] != 0:
                    r = byj.setdefault(j - n2 + k, {})
                    r[i] = r.get(i, 0) - c * P2[k]
    rem = {(i, j): v for j, row in byj.items() for i, v in row.items()}
    return Poly2(qt), Poly2(rem)


def _swap(F: Poly2):
    return Poly2({(j, i): v for (i, j), v in F.t.items()})


def _exact_div_x1(R: Poly2, P1):
    """R / P1(X1) coefficientwise in X2; raises if not exact."""
    byj = {}
    for (i, j), v in R.t.items():
        byj.setdefault(j, {})[i] = v
    out = {}
    for j, row in byj.items():
        num = [row.get(i, 0) for i in range(max(row) + 1)]
        qt, r = pdivmod(num, list(P1))
        if r:
            raise ArithmeticError("remainder not divisible by P1(X1)")
        for i, v in enumerate(qt):
            out[(i, j)] = v
    return Poly2(out)


def split_residual(P1, P2, p1: Poly2, p2: Poly2):
    P1, P2 = _check_ct1(P1), _check_ct1(P2)
    C = composed_product(P1, P2)
    F = Poly2({(k, k): c for k, c in enumerate(C)})
    return F - p1 * Poly2.in_x1(P1) - p2 * Poly2.in_x2(P2)


def bezout_split(P1, P2, variant="x2"):
    """(p1, p2) with (P1*P2)(X1X2) = p1 P1(X1) + p2 P2(X2).

    variant "x2": divide by P2(X2) in X2, so deg_X2 p1 < deg P2 (canonical).
    variant "x1": divide by P1(X1) in X1, so deg_X1 p2 < deg P1.
    """
    P1, P2 = _check_ct1(P1), _check_ct1(P2)
    C = composed_product(P1, P2)
    F = Poly2({(k, k): c for k, c in enumerate(C)})
    if variant == "x2":
        p2, rem = _div_in_x2(F, list(P2))
        p1 = _exact_div_x1(rem, list(P1))
    elif variant == "x1":
        p1s, rems = _div_in_x2(_swap(F), list(P1))
        p1 = _swap(p1s)
        p2 = _swap(_exact_div_x1(rems, list(P2)))
    else:
        raise ValueError("unknown variant %r" % variant)
    if not split_residual(P1, P2, p1, p2).is_zero():
        raise ArithmeticError("splitting identity failed")
    return p1, p2


def shift_split(P1, P2, p1: Poly2, p2: Poly2, h: Poly2):
    """Another splitting: (p1 + h P2(X2), p2 - h P1(X1))."""
    return p1 + h * Poly2.in_x2(P2), p2 - h * Poly2.in_x1(P1)


# -- annihilators and admissibility ---------------------------------------

@dataclass
class EigenData:
    """A square matrix over K0 standing for a sigma-semilinear operator."""

    matrix: list
    K: Optional[BaseFieldK0] = None
    semilinear: bool = True
    _cp: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("EigenData matrix must be square")

    @property
    def size(self):
        return len(self.matrix)

    def linearized(self, m):
        if self.K is None or not self.semilinear:
            return g_power(self.matrix, m)
        return semilinear_power(self.matrix, self.K, m)

    def charpoly(self, m=1):
        if m not in self._cp:
            self._cp[m] = charpoly(self.linearized(m))
        return self._cp[m]


def annihilator_poly(blocks, m):
    """M(T) = prod charpoly(Phi^m); returns P(T) = M(T^m) / M(0)."""
    if m < 1:
        raise ValueError("m must be positive")
    M = [1]
    for b in blocks:
        cp = b.charpoly(m)
        if cp[0] == 0:
            raise ValueError("degenerate Frobenius: block is not invertible")
        M = pmul(M, cp)
    P = Poly(pscale(psubs_power(M, m), _inv(M[0])))
    for b in blocks:
        if not g_is_zero(apply_poly_semilinear(P, b, m)):
            raise ArithmeticError("annihilator check failed")
    return P


def apply_poly_semilinear(P, block: EigenData, m):
    """Matrix of P(Phi) when P is a polynomial in T^m (so P(Phi) is linear)."""
    for k, c in enumerate(P):
        if c != 0 and k % m:
            raise ValueError("P(Phi) is not linear: exponent %d not divisible by %d" % (k, m))
    B = block.linearized(m)
    return g_polyval([P[k * m] for k in range(P.degree // m + 1)], B)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _roots_power_poly(P: Poly, k):
    """Monic polynomial whose roots are the k-th powers of the roots of P."""
    if P.degree <= 0:
        return [1]
    return charpoly(g_power(companion(list(P.monic())), k))


def is_admissible(P, r, d, f, hk1: Optional[EigenData] = None, p=None):
    """Conditions (i)-(iii) with roots of unity in mu_f eliminated by f-th powers.

    The prime comes from ``p`` or from the field of ``hk1``.
    """
    P = _check_ct1(P)
    if p is None:
        if hk1 is None or hk1.K is None:
            raise ValueError("prime unknown: pass p")
        p = hk1.K.p
    if r < d + 1:
        return Verdict(False, "r < d+1")
    if P.degree == 0:
        return Verdict(True, "no roots")
    Rf = _roots_power_poly(P, f)
    if peval(Rf, Fraction(p) ** (d * f)) == 0:
        return Verdict(False, "(i) alpha^f = p^(d f)")
    if peval(Rf, Fraction(p) ** ((d + 1) * f)) == 0:
        return Verdict(False, "(ii) alpha^f = p^((d+1) f)")
    if hk1 is not None and hk1.size:
        # roots lambda * alpha^f, lambda eigenvalue of the f-th power of the hk1 operator
        prod = charpoly(g_kron(companion(Rf), hk1.linearized(f)))
        if peval(prod, Fraction(p) ** ((d + 1) * f)) == 0:
            return Verdict(False, "(iii) (p^(d+1)/alpha)^f is an eigenvalue of Phi^f on HK^1")
    return Verdict(True, "admissible")


def has_root_of_unity(R):
    """Whether the polynomial R (over Q or K0) has a root that is a root of unity."""
    R = _strip(R)
    n = len(R) - 1
    if n <= 0:
        return False
    for k in range(1, 2 * n * n + 3):
        if euler_phi(k) > n:
            continue
        g = pgcd(R, [Fraction(c) for c in cyclotomic_poly(k)])
        if pdeg(g) > 0:
            return True
    return False


def weil_admissibility(P, r, d, f, p):
    """Sufficient criterion: no root alpha of P lies in p^d mu, p^(d+1/2) mu or p^(d+1) mu.

    mu is the group of all roots of unity; the f-th power tests are the mu_f special case.
    """
    P = _check_ct1(P)
    if r < d + 1:
        return Verdict(False, "r < d+1")
    if P.degree == 0:
        return Verdict(True, "no roots")
    for t in (d, d + 1):
        if has_root_of_unity(list(P.scale_var(Fraction(p) ** t))):
            return Verdict(False, "alpha = p^%d * root of unity" % t)
    sq = Poly(_roots_power_poly(P, 2)).scale_var(Fraction(p) ** (2 * d + 1))
    if has_root_of_unity(list(sq)):
        return Verdict(False, "alpha^2 = p^(2d+1) * root of unity")
    Rf = _roots_power_poly(P, f)
    for e in (d * f, (d + 1) * f):
        if peval(Rf, Fraction(p) ** e) == 0:
            return Verdict(False, "alpha^f = p^%d" % e)
    R2f = _roots_power_poly(P, 2 * f)
    if peval(R2f, Fraction(p) ** ((2 * d + 1) * f)) == 0:
        return Verdict(False, "alpha^(2f) = p^((2d+1) f)")
    return Verdict(True, "weil-admissible")
