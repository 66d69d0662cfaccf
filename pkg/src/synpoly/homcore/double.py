"""Commutative double complexes and their total complexes."""
from .. import linalg as la
from .complexes import Complex, ConventionError


class DoubleComplex:
    """K^{p,q} with d1: K^{p,q} -> K^{p+1,q}, d2: K^{p,q} -> K^{p,q+1}, d1 d2 = d2 d1."""

    def __init__(self, dims, d1=None, d2=None, check=True):
        self.dims = {(int(p), int(q)): int(n) for (p, q), n in dims.items() if n}
        self._d1, self._d2 = {}, {}
        for store, src, dp, dq in ((self._d1, d1, 1, 0), (self._d2, d2, 0, 1)):
            for (p, q), m in (src or {}).items():
                want = (self.dim(p + dp, q + dq), self.dim(p, q))
                if la.shape(m) != want:
                    raise ConventionError("differential at (%d,%d) has shape %s, expected %s"
                                          % (p, q, la.shape(m), want))
                if not la.is_zero(m):
                    store[(p, q)] = m
        self._tot = None
        if check:
            self.check()

    def dim(self, p, q):
        return self.dims.get((p, q), 0)

    def d1(self, p, q):
        m = self._d1.get((p, q))
        return m if m is not None else la.zeros(self.dim(p + 1, q), self.dim(p, q))

    def d2(self, p, q):
        m = self._d2.get((p, q))
        return m if m is not None else la.zeros(self.dim(p, q + 1), self.dim(p, q))

    @property
    def bidegrees(self):
        return sorted(self.dims)

    @property
    def p_range(self):
        ps = [p for p, _ in self.dims]
        return (min(ps), max(ps)) if ps else (0, -1)

    @property
    def q_range(self):
        qs = [q for _, q in self.dims]
        return (min(qs), max(qs)) if qs else (0, -1)

    def check(self):
        for (p, q) in self.bidegrees:
            if not la.is_zero(self.d1(p + 1, q) * self.d1(p, q)):
                raise ConventionError("d1 o d1 != 0 at (%d,%d)" % (p, q))
            if not la.is_zero(self.d2(p, q + 1) * self.d2(p, q)):
                raise ConventionError("d2 o d2 != 0 at (%d,%d)" % (p, q))
            if self.d1(p, q + 1) * self.d2(p, q) != self.d2(p + 1, q) * self.d1(p, q):
                raise ConventionError("d1 d2 != d2 d1 at (%d,%d)" % (p, q))

    def column(self, p):
        q0, q1 = self.q_range
        return Complex({q: self.dim(p, q) for q in range(q0, q1 + 1)},
                       {q: self.d2(p, q) for q in range(q0, q1 + 1)})

    def total(self):
        if self._tot is None:
            self._tot = TotalComplex(self)
        return self._tot


class TotalComplex(Complex):
    """Tot^n = sum over p of K^{p,n-p}, differential d1 + (-1)^p d2.

    Summands are ordered by increasing p; ``offset(p, q)`` locates K^{p,q}
    inside Tot^{p+q}.
    """

    def __init__(self, D: DoubleComplex):
        self.D = D
        p0, p1 = D.p_range
        self.ps = list(range(p0, p1 + 1))
        q0, q1 = D.q_range
        lo, hi = p0 + q0, p1 + q1
        self._off = {}
        dims = {}
        for n in range(lo, hi + 1):
            o = 0
            for p in self.ps:
                self._off[(p, n - p)] = o
                o += D.dim(p, n - p)
            dims[n] = o
        diffs = {}
        for n in range(lo, hi + 1):
            m = la.zeros(dims.get(n + 1, 0), dims.get(n, 0))
            for p in self.ps:
                q = n - p
                if not D.dim(p, q):
                    continue
                c = self._off[(p, q)]
                if D.dim(p + 1, q):
                    la.set_block(m, self._off[(p + 1, q)], c, D.d1(p, q))
                if D.dim(p, q + 1):
                    s = -1 if p % 2 else 1
                    la.set_block(m, self._off[(p, q + 1)], c, D.d2(p, q) * s)
            diffs[n] = m
        super().__init__(dims, diffs, check=False)
        try:
            self.check()
        except ConventionError as e:
            raise ConventionError("total differential does not square to zero: %s" % e)

    def offset(self, p, q):
        return self._off.get((p, q), 0)

    def inject(self, p, q, v):
        """Embed columns of K^{p,q} into Tot^{p+q}."""
        out = la.zeros(self.dim(p + q), v.ncols())
        if self.D.dim(p, q):
            la.set_block(out, self.offset(p, q), 0, v)
        return out

    def component(self, p, q, v):
        """The K^{p,q} part of columns v of Tot^{p+q}."""
        o = self.offset(p, q)
        return la.get_block(v, o, o + self.D.dim(p, q), 0, v.ncols())

    def filtration(self, p, n):
        """Basis of F^p Tot^n = sum over p' >= p of K^{p',n-p'} (as columns)."""
        idx = []
        for pp in self.ps:
            if pp >= p:
                o = self.offset(pp, n - pp)
                idx += range(o, o + self.D.dim(pp, n - pp))
        return la.columns(la.eye(self.dim(n)), idx)
