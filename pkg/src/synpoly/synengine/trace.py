"""Trace maps on top syntomic cohomology of a unit package."""
from dataclasses import dataclass, field

from .. import linalg as la
from ..scalars import Poly, _check_ct1
from .package import GeometricPackage
from .syn import SynComplex, f1_inverse


class InadmissibleError(ValueError):
    pass


@dataclass(eq=False)
class TraceContext:
    """Unit package, a de Rham trace functional in degree ``top`` and a certified (P, r).

    ``tr_dR`` is a 1-row matrix on C_dR^top; it must kill Fil^r and coboundaries.
    ``certificate`` is any truthy verdict (e.g. ``scalars.is_admissible``); it is
    required, never inferred.
    """

    G: GeometricPackage
    tr_dR: object
    P: Poly
    r: int
    certificate: object
    top: int = None
    S: SynComplex = field(init=False, repr=False)

    def __post_init__(self):
        if not self.certificate:
            raise InadmissibleError("trace needs an admissibility certificate for (P, r); got %r"
                                    % (self.certificate,))
        self.P = _check_ct1(self.P if isinstance(self.P, Poly) else Poly(self.P))
        if self.top is None:
            self.top = 2 * self.G.d
        G, t = self.G, self.top
        D = G.C_dR
        if la.shape(self.tr_dR) != (1, D.dim(t)):
            raise ValueError("tr_dR must be a 1 x %d row" % D.dim(t))
        F = G.fil.basis(self.r, t)
        if F.ncols() and not la.is_zero(self.tr_dR * F):
            raise ValueError("tr_dR does not vanish on Fil^%d" % self.r)
        if D.dim(t - 1) and not la.is_zero(self.tr_dR * D.d(t - 1)):
            raise ValueError("tr_dR does not vanish on coboundaries")
        H = D.cohomology(t)
        if H.dim == 0 or la.is_zero(self.tr_dR * H.reps):
            raise ValueError("tr_dR vanishes on top de Rham cohomology")
        self.S = SynComplex(G, self.P, self.r)
        # P(Phi) must be invertible one degree up as well, so a top class has exact C_an part
        M = G.P_of_Phi_map(self.P).on_cohomology(t + 1)
        if M.ncols() and la.rank(M) < M.ncols():
            raise InadmissibleError("P(Phi) is not invertible on H^%d(C_an)" % (t + 1))
        self._inv = f1_inverse(self.S, t + 1)

    @property
    def degree(self):
        return self.top + 1

    def __call__(self, v):
        return trace_map(self, v)

    def row(self):
        """The trace as a row on H^{top+1}(Tot) in representative coordinates."""
        H = self.S.T.cohomology(self.degree)
        if H.dim == 0:
            return la.zeros(1, 0)
        return trace_map(self, H.reps)


def trace_map(ctx: TraceContext, v):
    """Tr_dR(y - gamma(P(Phi)^{-1} x)) for cocycle columns v of Tot^{top+1}; returns a 1-row matrix."""
    S = ctx.S
    _, _, lift = S.G.quotient(S.r)
    HQ = S.Q.cohomology(ctx.top)
    if HQ.dim == 0:
        return la.zeros(1, v.ncols())
    coords = ctx._inv.backward(v)
    return ctx.tr_dR * lift[ctx.top] * HQ.reps * coords


def trace_scalar(ctx, v):
    return trace_map(ctx, v)[0, 0]
