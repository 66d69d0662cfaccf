"""Exact rational linear algebra on top of flint's ``fmpq_mat``.

Subspaces of Q^n are passed around as matrices whose columns form a basis.
Every basis choice is pivot-ordered, hence deterministic.
"""
from fractions import Fraction

from flint import fmpq, fmpq_mat

Mat = fmpq_mat


def q(x):
    """Coerce int / Fraction / fmpq / "a/b" string to fmpq."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return fmpq(f.numerator, f.denominator)
    return fmpq(x)


def to_fraction(x):
    x = q(x)
    return Fraction(int(x.p), int(x.q))


def mat(rows, nrows=None, ncols=None):
    rows = [list(r) for r in rows]
    m = len(rows) if nrows is None else nrows
    n = (len(rows[0]) if rows else 0) if ncols is None else ncols
    out = fmpq_mat(m, n)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if v:
                out[i, j] = q(v)
    return out


def zeros(m, n):
    return fmpq_mat(m, n)


def eye(n, c=1):
    out = fmpq_mat(n, n)
    c = q(c)
    for i in range(n):
        out[i, i] = c
    return out


def col(vals):
    vals = list(vals)
    return mat([[v] for v in vals], len(vals), 1)


def shape(A):
    return A.nrows(), A.ncols()


def entries(A):
    """Row-major list of Fractions."""
    return [[to_fraction(A[i, j]) for j in range(A.ncols())] for i in range(A.nrows())]


def is_zero(A):
    return all(e == 0 for e in A.entries())


def copy(A):
    return A * 1 if A.nrows() and A.ncols() else fmpq_mat(A.nrows(), A.ncols())


def hstack(*ms, nrows=None):
    ms = [m for m in ms if m is not None]
    if nrows is None:
        nrows = ms[0].nrows() if ms else 0
    n = sum(m.ncols() for m in ms)
    out = fmpq_mat(nrows, n)
    c0 = 0
    for m in ms:
        if m.nrows() != nrows:
            raise ValueError("hstack row mismatch")
        for i in range(nrows):
            for j in range(m.ncols()):
                v = m[i, j]
                if v:
                    out[i, c0 + j] = v
        c0 += m.ncols()
    return out


def vstack(*ms, ncols=None):
    ms = [m for m in ms if m is not None]
    if ncols is None:
        ncols = ms[0].ncols() if ms else 0
    n = sum(m.nrows() for m in ms)
    out = fmpq_mat(n, ncols)
    r0 = 0
    for m in ms:
        if m.ncols() != ncols:
            raise ValueError("vstack column mismatch")
        for i in range(m.nrows()):
            for j in range(ncols):
                v = m[i, j]
                if v:
                    out[r0 + i, j] = v
        r0 += m.nrows()
    return out


def block(rows, row_dims, col_dims):
    """Assemble a block matrix; entries may be None for zero blocks."""
    out = fmpq_mat(sum(row_dims), sum(col_dims))
    r0 = 0
    for bi, rd in enumerate(row_dims):
        c0 = 0
        for bj, cd in enumerate(col_dims):
            b = rows[bi][bj]
            if b is not None:
                if (b.nrows(), b.ncols()) != (rd, cd):
                    raise ValueError("block (%d,%d) has shape %s, expected %s"
                                     % (bi, bj, (b.nrows(), b.ncols()), (rd, cd)))
                set_block(out, r0, c0, b)
            c0 += cd
        r0 += rd
    return out


def set_block(target, r0, c0, b):
    for i in range(b.nrows()):
        for j in range(b.ncols()):
            v = b[i, j]
            if v:
                target[r0 + i, c0 + j] = v


def get_block(A, r0, r1, c0, c1):
    out = fmpq_mat(r1 - r0, c1 - c0)
    for i in range(r0, r1):
        for j in range(c0, c1):
            v = A[i, j]
            if v:
                out[i - r0, j - c0] = v
    return out


def columns(A, idx):
    idx = list(idx)
    out = fmpq_mat(A.nrows(), len(idx))
    for k, j in enumerate(idx):
        for i in range(A.nrows()):
            v = A[i, j]
            if v:
                out[i, k] = v
    return out


def rows_of(A, idx):
    idx = list(idx)
    out = fmpq_mat(len(idx), A.ncols())
    for k, i in enumerate(idx):
        for j in range(A.ncols()):
            v = A[i, j]
            if v:
                out[k, j] = v
    return out


def kron(A, B):
    m, n = A.nrows(), A.ncols()
    r, s = B.nrows(), B.ncols()
    out = fmpq_mat(m * r, n * s)
    for i in range(m):
        for j in range(n):
            a = A[i, j]
            if not a:
                continue
            for k in range(r):
                for l in range(s):
                    b = B[k, l]
                    if b:
                        out[i * r + k, j * s + l] = a * b
    return out


def rank(A):
    if A.nrows() == 0 or A.ncols() == 0:
        return 0
    return A.rank()


def rref(A):
    """Reduced row echelon form and pivot columns."""
    if A.nrows() == 0 or A.ncols() == 0:
        return fmpq_mat(A.nrows(), A.ncols()), []
    R, rk = A.rref()
    piv = []
    for i in range(rk):
        for j in range(R.ncols()):
            if R[i, j]:
                piv.append(j)
                break
    return R, piv


def pivots(A):
    return rref(A)[1]


def column_basis(A):
    """Independent columns of A spanning its column space (pivot order)."""
    return columns(A, pivots(A))


def nullspace(A):
    """Basis of {x : A x = 0} as columns."""
    n = A.ncols()
    R, piv = rref(A)
    free = [j for j in range(n) if j not in set(piv)]
    out = fmpq_mat(n, len(free))
    for k, fj in enumerate(free):
        out[fj, k] = 1
        for i, pj in enumerate(piv):
            v = R[i, fj]
            if v:
                out[pj, k] = -v
    return out


def left_nullspace(A):
    return nullspace(A.transpose()).transpose()


def solve(A, B):
    """Some X with A X = B (free variables set to zero), or None."""
    m, n = A.nrows(), A.ncols()
    k = B.ncols()
    if m == 0:
        return fmpq_mat(n, k)
    aug = hstack(A, B)
    R, piv = rref(aug)
    if any(p >= n for p in piv):
        return None
    X = fmpq_mat(n, k)
    for i, pj in enumerate(piv):
        for c in range(k):
            v = R[i, n + c]
            if v:
                X[pj, c] = v
    return X


def inverse(A):
    if A.nrows() == 0:
        return fmpq_mat(0, 0)
    return A.inv()


def det(A):
    if A.nrows() == 0:
        return fmpq(1)
    return A.det()


# -- subspaces -----------------------------------------------------------

def span(*ms, dim=None):
    ms = [m for m in ms if m is not None and m.ncols() > 0]
    if not ms:
        return fmpq_mat(dim or 0, 0)
    return column_basis(hstack(*ms))


def contains(U, v):
    """Whether every column of v lies in the column space of U."""
    if v.ncols() == 0:
        return True
    if U.ncols() == 0:
        return is_zero(v)
    return rank(hstack(U, v)) == rank(U)


def intersect(U, V):
    n = U.nrows()
    if U.ncols() == 0 or V.ncols() == 0:
        return fmpq_mat(n, 0)
    N = nullspace(hstack(U, -V))
    return column_basis(U * get_block(N, 0, U.ncols(), 0, N.ncols()))


def complement(U, W):
    """Columns of U whose classes give a basis of span(U)/span(W), W ⊆ U."""
    n = U.nrows()
    if U.ncols() == 0:
        return fmpq_mat(n, 0)
    piv = pivots(hstack(W, U))
    w = W.ncols()
    return columns(U, [p - w for p in piv if p >= w])


class Coordinates:
    """Coordinates relative to a column basis B (full column rank).

    ``of(v)`` returns c with B c = v; v must lie in the span.
    """

    def __init__(self, B):
        self.B = B
        self.k = B.ncols()
        if self.k:
            R, piv = rref(B.transpose())
            self.rows = piv
            self.Binv = inverse(rows_of(B, piv))
        else:
            self.rows = []
            self.Binv = fmpq_mat(0, 0)

    def of(self, v, check=True):
        if self.k == 0:
            if check and not is_zero(v):
                raise ValueError("vector outside the span")
            return fmpq_mat(0, v.ncols())
        c = self.Binv * rows_of(v, self.rows)
        if check and self.B * c != v:
            raise ValueError("vector outside the span")
        return c


def polyval_matrix(coeffs, A):
    """Horner evaluation of a Q-polynomial (constant term first) at A."""
    n = A.nrows()
    out = fmpq_mat(n, n)
    for c in reversed(list(coeffs)):
        out = out * A + eye(n, c)
    return out
