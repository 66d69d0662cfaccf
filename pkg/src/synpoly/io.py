"""Canonical JSON for matrices, complexes, packages and the engines' inputs.

Rationals are strings "a/b" (or "a" for integers) and are always reduced;
matrices are row-major lists of rows whose shape is fixed by the surrounding
dimensions. ``dumps`` sorts keys, so equal objects serialize byte-identically.
"""
import json
from fractions import Fraction

from . import CONVENTION_LEDGER_VERSION
from . import linalg as la
from .homcore import Complex, ConventionError, DoubleComplex
from .scalars import Poly, Poly2, _check_ct1


class ParseError(ValueError):
    """Malformed input; ``path`` is a JSON-pointer-like location."""

    def __init__(self, msg, path=""):
        super().__init__("%s: %s" % (path or "<root>", msg))
        self.path = path
        self.msg = msg


def dumps(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("invalid JSON (%s)" % e.msg, "line %d" % e.lineno) from None


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- scalars ------------------------------------------------------------------

def rat(x):
    x = la.to_fraction(x) if not isinstance(x, (int, Fraction)) else Fraction(x)
    return str(x)


def parse_rat(v, path=""):
    if isinstance(v, bool):
        raise ParseError("expected a rational, got a boolean", path)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError("expected a rational as 'a/b' or an integer, got %r" % (v,), path)


def poly_to(P):
    return [rat(c) for c in P]


def parse_poly(v, path="", ct1=True):
    if isinstance(v, str):
        v = [s for s in v.split(",") if s.strip()]
    if not isinstance(v, list):
        raise ParseError("expected a coefficient list (constant term first)", path)
    P = Poly([parse_rat(c, "%s/%d" % (path, i)) for i, c in enumerate(v)])
    if ct1:
        try:
            _check_ct1(P)
        except ValueError as e:
            raise ParseError(str(e), path) from None
    return P


def poly2_to(p):
    return {"%d,%d" % k: rat(c) for k, c in sorted(p.t.items())}


def parse_poly2(v, path=""):
    if not isinstance(v, dict):
        raise ParseError("expected {\"i,j\": coefficient}", path)
    out = {}
    for k, c in v.items():
        try:
            i, j = (int(s) for s in k.split(","))
        except ValueError:
            raise ParseError("bad exponent key %r" % k, path) from None
        out[(i, j)] = parse_rat(c, "%s/%s" % (path, k))
    return Poly2(out)


# -- matrices -------------------------------------------------------------------

def mat_to(M):
    return [[rat(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def parse_mat(v, m, n, path=""):
    """Row-major list of m rows of n entries; an empty list stands for any zero-size matrix."""
    if v is None:
        return la.zeros(m, n)
    if not isinstance(v, list):
        raise ParseError("expected a list of rows", path)
    if m == 0 or n == 0:
        if any(len(r) for r in v) or (m == 0 and v):
            raise ParseError("expected an empty %dx%d matrix" % (m, n), path)
        return la.zeros(m, n)
    if len(v) != m or any(not isinstance(r, list) or len(r) != n for r in v):
        got = (len(v), len(v[0]) if v and isinstance(v[0], list) else 0)
        raise ParseError("shape mismatch: expected %dx%d, got %dx%d" % (m, n, got[0], got[1]), path)
    return la.mat([[parse_rat(c, "%s/%d/%d" % (path, i, j)) for j, c in enumerate(r)]
                   for i, r in enumerate(v)], m, n)


def parse_vectors(v, n, path=""):
    """A spanning set given as a list of length-n vectors -> n x k matrix."""
    if not isinstance(v, list):
        raise ParseError("expected a list of vectors", path)
    cols = []
    for i, vec in enumerate(v):
        if not isinstance(vec, list) or len(vec) != n:
            raise ParseError("vector of length %d expected" % n, "%s/%d" % (path, i))
        cols.append([parse_rat(c, "%s/%d/%d" % (path, i, j)) for j, c in enumerate(vec)])
    if not cols:
        return la.zeros(n, 0)
    return la.mat(cols, len(cols), n).transpose()


def vectors_to(B):
    return [[rat(B[i, j]) for i in range(B.nrows())] for j in range(B.ncols())]


def _int_keys(d, path):
    if not isinstance(d, dict):
        raise ParseError("expected an object keyed by degree", path)
    out = {}
    for k, v in d.items():
        try:
            out[int(k)] = v
        except ValueError:
            raise ParseError("degree key %r is not an integer" % k, path) from None
    return out


# -- complexes ----------------------------------------------------------------------

def complex_to(C: Complex):
    return {"dims": {str(q): C.dim(q) for q in C.degrees if C.dim(q)},
            "d": {str(q): mat_to(C.d(q)) for q in C.degrees if not la.is_zero(C.d(q))}}


def parse_complex(doc, path="complex"):
    if not isinstance(doc, dict) or "dims" not in doc:
        raise ParseError("a complex needs 'dims'", path)
    dims = {q: v for q, v in _int_keys(doc["dims"], path + "/dims").items()}
    for q, n in dims.items():
        if not isinstance(n, int) or n < 0:
            raise ParseError("dimension must be a non-negative integer", "%s/dims/%d" % (path, q))
    diffs = {}
    for q, m in _int_keys(doc.get("d", {}), path + "/d").items():
        diffs[q] = parse_mat(m, dims.get(q + 1, 0), dims.get(q, 0), "%s/d/%d" % (path, q))
    try:
        return Complex(dims, diffs)
    except ConventionError as e:
        raise ValidationError(str(e), path) from None


def _maps(doc, src, tgt, path, degree=0):
    out = {}
    for q, m in _int_keys(doc or {}, path).items():
        out[q] = parse_mat(m, tgt.dim(q + degree), src.dim(q), "%s/%d" % (path, q))
    return out


def maps_to(f, degrees):
    return {str(q): mat_to(f.at(q)) for q in degrees if f.at(q).nrows() and f.at(q).ncols()}


def double_to(D: DoubleComplex):
    return {"dims": {"%d,%d" % k: v for k, v in sorted(D.dims.items())},
            "d1": {"%d,%d" % k: mat_to(D.d1(*k)) for k in D.bidegrees if not la.is_zero(D.d1(*k))},
            "d2": {"%d,%d" % k: mat_to(D.d2(*k)) for k in D.bidegrees if not la.is_zero(D.d2(*k))}}


def _bikeys(d, path):
    out = {}
    for k, v in (d or {}).items():
        try:
            p, q = (int(s) for s in k.split(","))
        except ValueError:
            raise ParseError("bidegree key %r is not 'p,q'" % k, path) from None
        out[(p, q)] = v
    return out


def parse_double(doc, path="double"):
    dims = _bikeys(doc.get("dims"), path + "/dims")
    dim = lambda p, q: dims.get((p, q), 0)
    d1 = {k: parse_mat(m, dim(k[0] + 1, k[1]), dim(*k), "%s/d1/%d,%d" % ((path,) + k))
          for k, m in _bikeys(doc.get("d1"), path + "/d1").items()}
    d2 = {k: parse_mat(m, dim(k[0], k[1] + 1), dim(*k), "%s/d2/%d,%d" % ((path,) + k))
          for k, m in _bikeys(doc.get("d2"), path + "/d2").items()}
    try:
        return DoubleComplex(dims, d1, d2)
    except ConventionError as e:
        raise ValidationError(str(e), path) from None


# -- packages --------------------------------------------------------------------------

class ValidationError(ValueError):
    """Well-formed input violating an invariant (d^2 != 0, N Phi != p Phi N, ...)."""

    def __init__(self, msg, where=""):
        super().__init__("%s: %s" % (where, msg) if where else msg)
        self.where = where
        self.msg = msg


def parse_package(doc, path="package"):
    from .synengine import Filtration, GeometricPackage, PackageError
    if not isinstance(doc, dict):
        raise ParseError("a package document is an object", path)
    field = doc.get("field", {})
    if "p" not in field:
        raise ParseError("field.p is required", path + "/field")
    p, f = field["p"], field.get("f", 1)
    if not isinstance(p, int) or not isinstance(f, int):
        raise ParseError("field.p and field.f must be integers", path + "/field")
    for key in ("C_an", "C_dR"):
        if key not in doc:
            raise ParseError("missing %s" % key, path)
    A = parse_complex(doc["C_an"], path + "/C_an")
    D = parse_complex(doc["C_dR"], path + "/C_dR")
    Phi = _maps(doc["C_an"].get("Phi"), A, A, path + "/C_an/Phi")
    N = _maps(doc["C_an"]["N"], A, A, path + "/C_an/N") if "N" in doc["C_an"] else None
    zeta = _maps(doc["C_an"]["zeta"], A, A, path + "/C_an/zeta") if "zeta" in doc["C_an"] else None
    gamma = _maps(doc.get("gamma"), A, D, path + "/gamma")
    levels = {}
    for r, per in _int_keys(doc["C_dR"].get("fil", {}), path + "/C_dR/fil").items():
        levels[r] = {q: parse_vectors(v, D.dim(q), "%s/C_dR/fil/%d/%d" % (path, r, q))
                     for q, v in _int_keys(per, "%s/C_dR/fil/%d" % (path, r)).items()}
        for q in D.degrees:
            levels[r].setdefault(q, la.zeros(D.dim(q), 0))
    try:
        fil = Filtration(D, levels)
        return GeometricPackage(A, Phi, D, fil, gamma, p, N=N, d=int(doc.get("d", 0)),
                                support=str(doc.get("support", "plain")),
                                f=f, zeta=zeta, name=str(doc.get("name", "")))
    except PackageError as e:
        raise ValidationError(str(e), path) from None
    except ConventionError as e:
        raise ValidationError(str(e), path) from None


def package_to(G):
    doc = {"field": {"p": G.p, "f": G.f}, "d": G.d, "support": G.support,
           "C_an": complex_to(G.C_an), "C_dR": complex_to(G.C_dR),
           "gamma": maps_to(G.gam, G.C_an.degrees)}
    if G.name:
        doc["name"] = G.name
    doc["C_an"]["Phi"] = maps_to(G.phi, G.C_an.degrees)
    if G.mono is not None:
        doc["C_an"]["N"] = {str(q): mat_to(G.mono.at(q)) for q in G.C_an.degrees if G.C_an.dim(q)}
    if G.zeta:
        doc["C_an"]["zeta"] = {str(q): mat_to(z) for q, z in G.zeta.items()}
    fil = {}
    for r in range(G.fil.lo, G.fil.hi + 1):
        fil[str(r)] = {str(q): vectors_to(G.fil.basis(r, q)) for q in G.C_dR.degrees}
    doc["C_dR"]["fil"] = fil
    return doc


def canonical(doc_or_pkg):
    """parse -> serialize normal form."""
    G = doc_or_pkg if not isinstance(doc_or_pkg, dict) else parse_package(doc_or_pkg)
    return dumps(package_to(G))


def products_to(mul):
    return {"%d,%d" % k: mat_to(m) for k, m in sorted(mul.items())}


def parse_products(doc, C1, C2, C3, path):
    out = {}
    for k, m in _bikeys(doc, path).items():
        a, b = k
        out[k] = parse_mat(m, C3.dim(a + b), C1.dim(a) * C2.dim(b), "%s/%d,%d" % (path, a, b))
    return out


def report(kind, body):
    """Every report carries the convention ledger version."""
    out = {"kind": kind, "conventions": CONVENTION_LEDGER_VERSION}
    out.update(body)
    return out
