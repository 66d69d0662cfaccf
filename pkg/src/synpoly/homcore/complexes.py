"""Bounded cochain complexes of finite-dimensional Q-vector spaces."""
from dataclasses import dataclass

from .. import linalg as la


class ConventionError(ValueError):
    pass


class Complex:
    """dims: degree -> dimension; diffs: degree q -> matrix d^q : C^q -> C^{q+1}."""

    def __init__(self, dims, diffs=None, check=True, name=""):
        self.dims = {int(q): int(n) for q, n in dims.items() if n}
        self.name = name
        self._d = {}
        for q, m in (diffs or {}).items():
            q = int(q)
            if m.nrows() != self.dim(q + 1) or m.ncols() != self.dim(q):
                raise ConventionError("d^%d has shape %s, expected %s"
                                      % (q, la.shape(m), (self.dim(q + 1), self.dim(q))))
            if not la.is_zero(m):
                self._d[q] = m
        self._H = {}
        if check:
            self.check()

    @property
    def degrees(self):
        ks = sorted(self.dims)
        return range(ks[0], ks[-1] + 1) if ks else range(0)

    def dim(self, q):
        return self.dims.get(q, 0)

    def d(self, q):
        m = self._d.get(q)
        return m if m is not None else la.zeros(self.dim(q + 1), self.dim(q))

    def check(self):
        for q in self.degrees:
            if not la.is_zero(self.d(q + 1) * self.d(q)):
                raise ConventionError("d^%d o d^%d != 0" % (q + 1, q))

    def shift(self, n):
        """C[n]^q = C^{q+n} with differential (-1)^n d."""
        s = -1 if n % 2 else 1
        return Complex({q - n: k for q, k in self.dims.items()},
                       {q - n: m * s for q, m in self._d.items()})

    def cohomology(self, q):
        if q not in self._H:
            self._H[q] = Cohomology(self, q)
        return self._H[q]

    def h(self, q):
        return self.cohomology(q).dim

    def betti(self):
        return {q: self.h(q) for q in self.degrees if self.h(q)}

    def is_acyclic(self):
        return all(self.h(q) == 0 for q in self.degrees)

    def __repr__(self):
        return "Complex(dims=%s)" % dict(sorted(self.dims.items()))


class Cohomology:
    """H^q = Z/B with pivot-ordered representatives and a coordinate map on cocycles."""

    def __init__(self, C: Complex, q):
        self.C, self.q = C, q
        n = C.dim(q)
        self.Z = la.nullspace(C.d(q)) if n else la.zeros(0, 0)
        self.B = la.column_basis(C.d(q - 1)) if n else la.zeros(0, 0)
        self.reps = la.complement(self.Z, self.B) if n else la.zeros(0, 0)
        self.dim = self.reps.ncols()
        self._coords = la.Coordinates(la.hstack(self.B, self.reps, nrows=n)) if n else None

    def is_cocycle(self, v):
        return la.is_zero(self.C.d(self.q) * v)

    def class_of(self, v):
        """Coordinates of the class of cocycle(s) v (columns)."""
        if self.C.dim(self.q) == 0:
            return la.zeros(0, v.ncols())
        if not self.is_cocycle(v):
            raise ValueError("not a cocycle in degree %d" % self.q)
        c = self._coords.of(v)
        return la.get_block(c, self.B.ncols(), c.nrows(), 0, c.ncols())

    def is_coboundary(self, v):
        return la.is_zero(self.class_of(v))

    def rep(self, i):
        return la.columns(self.reps, [i])


class ChainMap:
    """Degree-k map f^q : S^q -> T^{q+k} with d_T f = (-1)^k f d_S."""

    def __init__(self, source: Complex, target: Complex, mats, degree=0, check=True):
        self.S, self.T, self.k = source, target, degree
        self._m = {}
        for q, m in mats.items():
            if la.shape(m) != (target.dim(q + degree), source.dim(q)):
                raise ConventionError("chain map block %d has shape %s" % (q, la.shape(m)))
            self._m[int(q)] = m
        if check:
            self.check()

    def at(self, q):
        m = self._m.get(q)
        return m if m is not None else la.zeros(self.T.dim(q + self.k), self.S.dim(q))

    def check(self):
        s = -1 if self.k % 2 else 1
        for q in set(self.S.degrees) | {q - self.k for q in self.T.degrees}:
            lhs = self.T.d(q + self.k) * self.at(q)
            rhs = self.at(q + 1) * self.S.d(q) * s
            if lhs != rhs:
                raise ConventionError("chain map fails to commute with d in degree %d" % q)

    def on_cohomology(self, q):
        """Matrix of H^q(S) -> H^{q+k}(T) in representative bases."""
        HS, HT = self.S.cohomology(q), self.T.cohomology(q + self.k)
        if HS.dim == 0:
            return la.zeros(HT.dim, 0)
        return HT.class_of(self.at(q) * HS.reps)

    def compose(self, other):
        """self o other."""
        qs = set(other.S.degrees)
        return ChainMap(other.S, self.T,
                        {q: self.at(q + other.k) * other.at(q) for q in qs},
                        self.k + other.k)


def identity_map(C: Complex):
    return ChainMap(C, C, {q: la.eye(C.dim(q)) for q in C.degrees})


def cone(f: ChainMap):
    """Cone(f)^q = A^{q+1} + B^q, d(a, b) = (-d_A a, f(a) + d_B b)."""
    if f.k != 0:
        raise ConventionError("cone needs a degree-0 map")
    A, B = f.S, f.T
    lo = min(list(A.degrees)[:1] + list(B.degrees)[:1], default=0) - 1
    hi = max(list(A.degrees)[-1:] + list(B.degrees)[-1:], default=0)
    dims, diffs = {}, {}
    for q in range(lo, hi + 1):
        dims[q] = A.dim(q + 1) + B.dim(q)
    for q in range(lo, hi + 1):
        diffs[q] = la.block([[-A.d(q + 1), None], [f.at(q + 1), B.d(q)]],
                            [A.dim(q + 2), B.dim(q + 1)], [A.dim(q + 1), B.dim(q)])
    return Complex(dims, diffs)


def cone_sequence_dims(f: ChainMap):
    """dim H^q(Cone) vs dim coker H^q(f) + dim ker H^{q+1}(f), per degree."""
    C = cone(f)
    out = {}
    for q in C.degrees:
        Hq, Hq1 = f.on_cohomology(q), f.on_cohomology(q + 1)
        coker = Hq.nrows() - la.rank(Hq)
        ker = Hq1.ncols() - la.rank(Hq1)
        out[q] = (C.h(q), coker + ker)
    return out


@dataclass
class SES:
    """0 -> A -i-> B -pi-> C -> 0, degreewise exact."""

    A: Complex
    B: Complex
    C: Complex
    i: ChainMap
    pi: ChainMap

    def __post_init__(self):
        self.check()

    def check(self):
        for q in set(self.A.degrees) | set(self.B.degrees) | set(self.C.degrees):
            I, P = self.i.at(q), self.pi.at(q)
            if la.rank(I) != self.A.dim(q):
                raise ValueError("i is not injective in degree %d" % q)
            if la.rank(P) != self.C.dim(q):
                raise ValueError("pi is not surjective in degree %d" % q)
            if not la.is_zero(P * I) or self.A.dim(q) + self.C.dim(q) != self.B.dim(q):
                raise ValueError("sequence not exact in the middle in degree %d" % q)

    def lift(self, q, c):
        """Some b in B^q with pi(b) = c."""
        b = la.solve(self.pi.at(q), c)
        if b is None:
            raise ValueError("no lift")
        return b

    def connecting_map(self, q):
        """delta : H^q(C) -> H^{q+1}(A) by lifting cocycles."""
        HC, HA = self.C.cohomology(q), self.A.cohomology(q + 1)
        if HC.dim == 0:
            return la.zeros(HA.dim, 0)
        b = self.lift(q, HC.reps)
        db = self.B.d(q) * b
        a = la.solve(self.i.at(q + 1), db)
        if a is None:
            raise ArithmeticError("d(lift) does not come from A")
        return HA.class_of(a)

    def long_exact_ok(self):
        """rank(in) = dim ker(out) at every node of the long exact sequence."""
        lo = min(min(X.degrees, default=0) for X in (self.A, self.B, self.C))
        hi = max(max(X.degrees, default=0) for X in (self.A, self.B, self.C))
        seq = []
        for q in range(lo - 1, hi + 2):
            seq += [(self.i.on_cohomology(q), self.A.h(q), self.B.h(q)),
                    (self.pi.on_cohomology(q), self.B.h(q), self.C.h(q)),
                    (self.connecting_map(q), self.C.h(q), self.A.h(q + 1))]
        for (f, _, _), (g, dom, _) in zip(seq, seq[1:]):
            if not la.is_zero(g * f):
                return False
            if la.rank(f) != dom - la.rank(g):
                return False
        return True
