"""Spectral sequence of the column filtration F^p Tot = sum_{p' >= p} K^{p', *}.

Pages are subquotients of Tot^{p+q}:

    Z_r^p = F^p ∩ d^{-1}(F^{p+r}),    E_r^{p,q} = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}),

so every class has a representative in the total complex and d_r is
induced by the total differential. This makes page products computable on
representatives.
"""
from .. import linalg as la
from .double import DoubleComplex


class Subquotient:
    """num / den with den ⊆ num ⊆ Q^n, both given by column bases."""

    def __init__(self, num, den):
        self.num = num
        self.den = la.span(den, dim=num.nrows())
        self.reps = la.complement(num, self.den)
        self.dim = self.reps.ncols()
        self._c = la.Coordinates(la.hstack(self.den, self.reps, nrows=num.nrows()))

    def coords(self, v):
        """Coordinates of the class of columns v (must lie in num)."""
        c = self._c.of(v)
        return la.get_block(c, self.den.ncols(), c.nrows(), 0, c.ncols())

    def contains(self, v):
        return la.contains(self.num, v)


class SpectralSequence:
    def __init__(self, D: DoubleComplex):
        self.D = D
        self.T = D.total()
        self._Z = {}
        self._E = {}
        p0, p1 = D.p_range
        self.width = p1 - p0 + 1

    def F(self, p, n):
        return self.T.filtration(p, n)

    def Z(self, r, p, n):
        """Z_r^p in total degree n; r = -1 gives F^p."""
        key = (r, p, n)
        if key not in self._Z:
            Fp = self.F(p, n)
            if r < 0:
                z = Fp
            else:
                dF = self.T.d(n) * Fp
                # x = Fp c with d x in F^{p+r}: kill the coordinates outside F^{p+r}
                keep = self._outside(p + r, n + 1)
                c = la.nullspace(la.rows_of(dF, keep)) if keep else la.eye(Fp.ncols())
                z = la.column_basis(Fp * c) if c.ncols() else la.zeros(self.T.dim(n), 0)
            self._Z[key] = z
        return self._Z[key]

    def _outside(self, p, n):
        idx = []
        for pp in self.T.ps:
            if pp < p:
                o = self.T.offset(pp, n - pp)
                idx += range(o, o + self.D.dim(pp, n - pp))
        return idx

    def page(self, r, p, q):
        """E_r^{p,q} as a Subquotient of Tot^{p+q} (r >= 0)."""
        key = (r, p, q)
        if key not in self._E:
            n = p + q
            num = self.Z(r, p, n)
            a = self.Z(r - 1, p + 1, n)
            b = self.T.d(n - 1) * self.Z(r - 1, p - r + 1, n - 1)
            self._E[key] = Subquotient(num, la.hstack(a, b, nrows=self.T.dim(n)))
        return self._E[key]

    def infinity_page(self, p, q):
        return self.page(self.width + 1, p, q)

    def dim(self, r, p, q):
        return self.page(r, p, q).dim

    def d_r(self, r, p, q):
        """Matrix of d_r : E_r^{p,q} -> E_r^{p+r, q-r+1} in representative bases."""
        src, tgt = self.page(r, p, q), self.page(r, p + r, q - r + 1)
        if src.dim == 0:
            return la.zeros(tgt.dim, 0)
        return tgt.coords(self.T.d(p + q) * src.reps)

    def bidegrees(self, slack=0):
        p0, p1 = self.D.p_range
        q0, q1 = self.D.q_range
        w = self.width + slack
        return [(p, q) for p in range(p0 - w, p1 + w + 1) for q in range(q0 - w, q1 + w + 1)]

    def pages(self, up_to):
        """{r: {(p, q): dim}} for r = 1..up_to, nonzero entries only."""
        out = {}
        for r in range(1, up_to + 1):
            out[r] = {}
            for (p, q) in self.bidegrees():
                k = self.dim(r, p, q)
                if k:
                    out[r][(p, q)] = k
        return out

    def check_page_cohomology(self, r):
        """E_{r+1} = H(E_r, d_r) dimensionwise."""
        for (p, q) in self.bidegrees():
            din = self.d_r(r, p - r, q + r - 1)
            dout = self.d_r(r, p, q)
            if not la.is_zero(dout * din):
                return False
            h = self.dim(r, p, q) - la.rank(dout) - la.rank(din)
            if h != self.dim(r + 1, p, q):
                return False
        return True

    # -- abutment -----------------------------------------------------

    def F_H(self, p, n):
        """F^p H^n: image of H^n(F^p) in H^n(Tot), as a subspace of Tot^n cocycles."""
        Z = la.intersect(self.F(p, n), la.nullspace(self.T.d(n))) if self.T.dim(n) else la.zeros(0, 0)
        return la.span(Z, self.T.d(n - 1), dim=self.T.dim(n))

    def graded_abutment(self, p, n):
        """dim F^p H^n / F^{p+1} H^n computed directly from the total complex."""
        return la.rank(self.F_H(p, n)) - la.rank(self.F_H(p + 1, n))

    def check_abutment(self):
        """E_infinity^{p,q} matches gr^p H^{p+q}(Tot) for all p, q."""
        for (p, q) in self.bidegrees():
            if self.infinity_page(p, q).dim != self.graded_abutment(p, p + q):
                return False
        return True
