"""Kernel/cokernel comparison for two triangles sharing their outer vertices.

Input: short exact sequences 0 -> X -> Y -> Z -> 0 (top) and 0 -> X -> Y' -> Z -> 0
(bottom) of complexes, with chain maps x: X -> X, y: Y -> Y', z: Z -> Z
forming a commutative ladder. If H^{j+1}(x) is injective and H^j(x) is an
isomorphism, the projection pi induces isomorphisms
ker H^j(y) ≅ ker H^j(z) and coker H^j(y) ≅ coker H^j(z).
"""
from dataclasses import dataclass

from .. import linalg as la
from .complexes import SES, ChainMap


class HypothesisFailure(ValueError):
    pass


@dataclass
class MarcoVerdict:
    ok: bool
    ker_dims: tuple
    coker_dims: tuple
    detail: str = ""

    def __bool__(self):
        return self.ok


def _ker(A):
    return la.nullspace(A)


def _induced_on_kernels(P, Ky, Kz):
    """Matrix of P restricted to ker(y) -> ker(z), in the given bases."""
    if Ky.ncols() == 0:
        return la.zeros(Kz.ncols(), 0)
    return la.Coordinates(Kz).of(P * Ky)


def _induced_on_cokernels(P, Iy, Iz, dim_y, dim_z):
    """Matrix of P on coker(y) = H(Y')/im -> coker(z) = H(Z')/im, in complement bases."""
    Cy = la.complement(la.eye(dim_y), Iy)
    Cz = la.complement(la.eye(dim_z), Iz)
    if Cy.ncols() == 0:
        return la.zeros(Cz.ncols(), 0), Cy, Cz
    Bz = la.hstack(Iz, Cz, nrows=dim_z)
    c = la.Coordinates(Bz).of(P * Cy)
    return la.get_block(c, Iz.ncols(), c.nrows(), 0, c.ncols()), Cy, Cz


def _same_complex(A, B):
    return A.dims == B.dims and all(A.d(q) == B.d(q) for q in A.degrees)


def triangle_ker_coker(top: SES, bottom: SES, x: ChainMap, y: ChainMap, z: ChainMap, j):
    # the two rows share X and Z; only the middle term changes
    if not (_same_complex(top.A, bottom.A) and _same_complex(top.C, bottom.C)):
        raise HypothesisFailure("rows must share their outer complexes X and Z")
    for q in set(top.B.degrees) | set(bottom.B.degrees):
        if bottom.i.at(q) * x.at(q) != y.at(q) * top.i.at(q):
            raise HypothesisFailure("left square does not commute in degree %d" % q)
        if bottom.pi.at(q) * y.at(q) != z.at(q) * top.pi.at(q):
            raise HypothesisFailure("right square does not commute in degree %d" % q)
    Hx1 = x.on_cohomology(j + 1)
    if la.rank(Hx1) != Hx1.ncols():
        raise HypothesisFailure("H^{j+1}(x) is not injective")
    Hx = x.on_cohomology(j)
    if not (Hx.nrows() == Hx.ncols() == la.rank(Hx)):
        raise HypothesisFailure("H^j(x) is not an isomorphism")

    Hy, Hz = y.on_cohomology(j), z.on_cohomology(j)
    Ptop, Pbot = top.pi.on_cohomology(j), bottom.pi.on_cohomology(j)
    Ky, Kz = _ker(Hy), _ker(Hz)
    Kmap = _induced_on_kernels(Ptop, Ky, Kz)
    Iy, Iz = la.column_basis(Hy), la.column_basis(Hz)
    Cmap, Cy, Cz = _induced_on_cokernels(Pbot, Iy, Iz, Hy.nrows(), Hz.nrows())

    def iso(M):
        return M.nrows() == M.ncols() == la.rank(M)

    ok = iso(Kmap) and iso(Cmap)
    return MarcoVerdict(ok, (Ky.ncols(), Kz.ncols()), (Cy.ncols(), Cz.ncols()),
                        "" if ok else "induced map on ker/coker is not bijective")


def four_term_ker_coker(top, bottom, verticals):
    """Exact rows 0 -> X -> Y -> Z -> W -> 0 of vector spaces with vertical maps x, y, z, w.

    top, bottom: (f, g, h) matrices X->Y, Y->Z, Z->W. verticals: (x, y, z, w).
    If x and w are isomorphisms, g induces ker(y) ≅ ker(z) and coker(y) ≅ coker(z).
    """
    f, g, h = top
    f2, g2, h2 = bottom
    x, y, z, w = verticals
    for name, (a, b) in {"top": (f, g), "top ": (g, h), "bottom": (f2, g2), "bottom ": (g2, h2)}.items():
        if not la.is_zero(b * a) or la.rank(a) + la.rank(b) != b.ncols():
            raise HypothesisFailure("%s row is not exact" % name.strip())
    for name, (a, n) in {"top": (f, f.ncols()), "bottom": (f2, f2.ncols())}.items():
        if la.rank(a) != n:
            raise HypothesisFailure("%s row is not injective at X" % name)
    for name, (a, n) in {"top": (h, h.nrows()), "bottom": (h2, h2.nrows())}.items():
        if la.rank(a) != n:
            raise HypothesisFailure("%s row is not surjective at W" % name)
    if f2 * x != y * f or g2 * y != z * g or h2 * z != w * h:
        raise HypothesisFailure("ladder does not commute")
    for name, m in (("x", x), ("w", w)):
        if not (m.nrows() == m.ncols() == la.rank(m)):
            raise HypothesisFailure("%s is not an isomorphism" % name)
    Ky, Kz = _ker(y), _ker(z)
    Kmap = _induced_on_kernels(g, Ky, Kz)
    Cmap, Cy, Cz = _induced_on_cokernels(g2, la.column_basis(y), la.column_basis(z), y.nrows(), z.nrows())
    ok = all(M.nrows() == M.ncols() == la.rank(M) for M in (Kmap, Cmap))
    return MarcoVerdict(ok, (Ky.ncols(), Kz.ncols()), (Cy.ncols(), Cz.ncols()))
