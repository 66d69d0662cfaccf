"""Operation registry and manifest runner.

Each operation is a pair (parse, run): ``parse(doc)`` turns an input document
into engine objects and raises ``ParseError``/``ValidationError``; ``run``
returns a JSON-ready report body. Invariant failures found while running are
reported with ``InvariantViolation``.
"""
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import io
from . import linalg as la
from .io import ParseError, ValidationError, mat_to, parse_mat, parse_poly, rat


class InvariantViolation(RuntimeError):
    def __init__(self, msg, body=None):
        super().__init__(msg)
        self.body = body or {}


EXIT_OK, EXIT_INVARIANT, EXIT_PARSE = 0, 1, 2


@dataclass
class Options:
    seed: int = 0
    trunc: int = None
    precision: int = None
    ideal: list = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        known = {k: d.pop(k) for k in ("seed", "trunc", "precision", "ideal") if k in d}
        return cls(extra=d, **known)


def _req(doc, key, path=""):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError("missing field '%s'" % key, path)
    return doc[key]


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError("expected an integer", path)
    return v


def _qmat(v, path):
    """Square-or-rectangular matrix whose shape is read from the rows themselves."""
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise ParseError("expected a list of rows", path)
    m = len(v)
    n = len(v[0]) if m else 0
    return parse_mat(v, m, n, path)


def _dims(d):
    return {str(k): v for k, v in sorted(d.items())}


# -- syn compute --------------------------------------------------------------------

def _parse_syn(doc):
    G = io.parse_package(_req(doc, "package"), "package")
    P = parse_poly(_req(doc, "P"), "P")
    r = _int(_req(doc, "r"), "r")
    return G, P, r


def run_syn_compute(doc, opt):
    from .synengine import f_filtration, SynComplex
    G, P, r = _parse_syn(doc)
    S = SynComplex(G, P, r)
    H, F0, F1, exact, e2 = {}, {}, {}, {}, {}
    for i in S.T.degrees:
        ff = f_filtration(S, i)
        H[i], F0[i], F1[i] = ff.H, ff.F0, ff.F1
        exact[i], e2[i] = ff.exact, ff.e2_agrees
    body = {"P": io.poly_to(P), "r": r, "H": _dims(H), "F0": _dims(F0), "F1": _dims(F1),
            "exact": _dims(exact), "e2_agrees": _dims(e2)}
    bad = [i for i in H if not (exact[i] and e2[i] and H[i] == F0[i] + F1[i])]
    if bad:
        raise InvariantViolation("F-filtration check failed in degrees %s" % bad, body)
    return body


# -- syn trace --------------------------------------------------------------------

def _certificate(doc, P, r, G, path="certificate"):
    """Certificates are explicit: either a supplied verdict or a request to run the check."""
    from .scalars import Verdict, is_admissible
    c = _req(doc, "certificate", "")
    if c == "is_admissible":
        return is_admissible(P, r, G.d, G.f, p=G.p)
    if isinstance(c, dict) and isinstance(c.get("ok"), bool):
        return Verdict(c["ok"], str(c.get("reason", "supplied")))
    raise ParseError("certificate must be \"is_admissible\" or {\"ok\": bool, \"reason\": str}", path)


def run_syn_trace(doc, opt):
    from .synengine import InadmissibleError, TraceContext, trace_map
    G, P, r = _parse_syn(doc)
    top = _int(doc.get("top", 2 * G.d), "top")
    tr = parse_mat(_req(doc, "trace"), 1, G.C_dR.dim(top), "trace")
    cert = _certificate(doc, P, r, G)
    try:
        ctx = TraceContext(G, tr, P, r, cert, top=top)
    except InadmissibleError as e:
        raise InvariantViolation(str(e), {"certificate": {"ok": cert.ok, "reason": cert.reason}})
    except ValueError as e:
        raise ValidationError(str(e), "trace")
    row = ctx.row()
    # representative independence under random coboundary perturbations
    rng = random.Random(opt.seed)
    T, n = ctx.S.T, ctx.degree
    H = T.cohomology(n)
    trials = int(opt.extra.get("perturbations", 10))
    stable = True
    if H.dim and T.dim(n - 1):
        for _ in range(trials):
            w = la.mat([[rng.randint(-3, 3)] for _ in range(T.dim(n - 1))], T.dim(n - 1), 1)
            k = rng.randrange(H.dim)
            if trace_map(ctx, H.rep(k) + T.d(n - 1) * w) != trace_map(ctx, H.rep(k)):
                stable = False
    body = {"P": io.poly_to(P), "r": r, "degree": n,
            "certificate": {"ok": cert.ok, "reason": cert.reason},
            "trace_on_classes": mat_to(row), "representative_independent": stable}
    if not stable:
        raise InvariantViolation("trace depends on the representative", body)
    return body


# -- syn pair ---------------------------------------------------------------------

def _split(variant, P1, P2, path):
    from .scalars import bezout_split
    if variant not in ("x1", "x2"):
        raise ParseError("split must be 'x1' or 'x2'", path)
    return bezout_split(P1, P2, variant)


def _pair_inputs(doc):
    from .synengine import models, tensor_packages
    model = doc.get("model", "explicit")
    if model == "random":
        seed = _int(_req(doc, "seed"), "seed")
        G1, G2, G3, m_an, m_dR, P1, P2, r1, r2 = models.random_pairing_setup(
            seed, max_deg=doc.get("max_deg", 2), max_dim=doc.get("max_dim", 2))
        return G1, G2, G3, m_an, m_dR, P1, P2, r1, r2, None
    P1, P2 = parse_poly(_req(doc, "P1"), "P1"), parse_poly(_req(doc, "P2"), "P2")
    r1, r2 = _int(_req(doc, "r1"), "r1"), _int(_req(doc, "r2"), "r2")
    if model == "unit_curve":
        G, m_an, m_dR, tr = models.unit_curve(_int(_req(doc, "p"), "p"))
        return G, G, G, m_an, m_dR, P1, P2, r1, r2, tr
    if model != "explicit":
        raise ParseError("model must be 'explicit', 'unit_curve' or 'random'", "model")
    pk = _req(doc, "packages")
    if not isinstance(pk, list) or len(pk) not in (2, 3):
        raise ParseError("packages is [G1, G2] or [G1, G2, G3]", "packages")
    G1 = io.parse_package(pk[0], "packages/0")
    G2 = io.parse_package(pk[1], "packages/1")
    if len(pk) == 2:
        G3, m_an, m_dR = tensor_packages(G1, G2)
    else:
        G3 = io.parse_package(pk[2], "packages/2")
        prods = _req(doc, "products")
        m_an = io.parse_products(_req(prods, "an", "products"), G1.C_an, G2.C_an, G3.C_an, "products/an")
        m_dR = io.parse_products(_req(prods, "dR", "products"), G1.C_dR, G2.C_dR, G3.C_dR, "products/dR")
    tr = parse_mat(doc["trace"], 1, G3.C_dR.dim(2 * G3.d), "trace") if "trace" in doc else None
    return G1, G2, G3, m_an, m_dR, P1, P2, r1, r2, tr


def _key(k):
    return ",".join(str(x) for x in k)


def run_syn_pair(doc, opt):
    from .synengine import (PackageError, PairingData, SynComplex, SynCup, TraceContext,
                            e2_pairing_matrices, pairing)
    G1, G2, G3, m_an, m_dR, P1, P2, r1, r2, tr = _pair_inputs(doc)
    lam = io.parse_rat(doc.get("lam", 1), "lam")
    split = _split(doc.get("split", "x2"), P1, P2, "split")
    try:
        PD = PairingData(G1, G2, G3, m_an, m_dR, lam=lam, split=split)
        cup = SynCup(SynComplex(G1, P1, r1), SynComplex(G2, P2, r2), PD)
    except PackageError as e:
        raise ValidationError(str(e), "products")
    leib = cup.leibniz()
    body = {"P1": io.poly_to(P1), "P2": io.poly_to(P2), "r1": r1, "r2": r2, "lam": rat(lam),
            "leibniz": bool(leib),
            "e2": {_key(k): mat_to(m) for k, m in sorted(e2_pairing_matrices(cup).items())}}
    if tr is not None:
        S3 = cup.S3
        cert = _certificate(doc, S3.P, S3.r, G3) if "certificate" in doc else None
        if cert is None:
            raise ParseError("a trace pairing needs a certificate", "certificate")
        ctx = TraceContext(G3, tr, S3.P, S3.r, cert)
        body["certificate"] = {"ok": cert.ok, "reason": cert.reason}
        body["pairing"] = {str(i): mat_to(pairing(cup, ctx, i)) for i in range(ctx.degree + 1)}
    if not leib:
        raise InvariantViolation("cup product fails the Leibniz rule", body)
    return body


# -- syn gysin ---------------------------------------------------------------------

def run_syn_gysin(doc, opt):
    from .synengine import gysin, gysin_adjunction_check, models
    model = doc.get("model", "curve_point")
    if model == "random":
        B = models.random_gysin_bundle(_int(_req(doc, "seed"), "seed"))
    elif model == "curve_point":
        p = _int(_req(doc, "p"), "p")
        h1 = None
        if "h1" in doc:
            M = parse_mat(_req(doc["h1"], "Phi", "h1"), 2, 2, "h1/Phi")
            line = parse_mat(_req(doc["h1"], "line", "h1"), 2, 1, "h1/line")
            h1 = (M, line)
        try:
            B = models.curve_point_bundle(p, h1)
        except ValueError as e:
            raise ValidationError(str(e), "h1")
    else:
        raise ParseError("model must be 'curve_point' or 'random'", "model")
    P = parse_poly(_req(doc, "P"), "P")
    r = _int(_req(doc, "r"), "r")
    i = _int(_req(doc, "i"), "i")
    rng = random.Random(opt.seed)
    g = gysin(B, P, r, i, rng=rng)
    body = {"P": io.poly_to(P), "r": r, "i": i, "quotient": {"P": io.poly_to(P.scale_var(B.G.p)), "r": r - 1},
            "gysin": mat_to(g.matrix), "snake_agrees": g.agrees,
            "lift_independent": g.lift_independent}
    ok = g.agrees and g.lift_independent
    if "adjunction" in doc:
        a = doc["adjunction"]
        P2 = parse_poly(_req(a, "P2", "adjunction"), "adjunction/P2")
        r2 = _int(_req(a, "r2", "adjunction"), "adjunction/r2")
        which = a.get("which", "first")
        j = _int(a.get("i", i), "adjunction/i")
        split = _split(a.get("split", "x2"), P, P2, "adjunction/split")
        from .scalars import composed_product, is_admissible
        P3 = composed_product(P, P2)
        certX = is_admissible(P3, r + r2, B.G.d, 1, p=B.G.p)
        certF = is_admissible(P3.scale_var(B.G.p), r + r2 - 1, B.GF.d, 1, p=B.G.p)
        if not (certX and certF):
            raise InvariantViolation("(P1*P2, r1+r2) is not admissible on both sides",
                                     dict(body, certificates=[certX.reason, certF.reason]))
        if which == "first":
            v = gysin_adjunction_check(B, P, r, P2, r2, j, split, certX, certF, "first", rng=rng)
        elif which == "second":
            v = gysin_adjunction_check(B, P2, r2, P, r, j, _split(a.get("split", "x2"), P2, P, "split"),
                                       certX, certF, "second", rng=rng)
        else:
            raise ParseError("which must be 'first' or 'second'", "adjunction/which")
        body["adjunction"] = {"which": which, "ok": bool(v), "lhs": mat_to(v.lhs), "rhs": mat_to(v.rhs),
                              "mismatches": [[a_, b_, rat(x), rat(y)] for a_, b_, x, y in v.mismatches]}
        ok = ok and bool(v)
    if not ok:
        raise InvariantViolation("Gysin checks failed", body)
    return body


# -- syn admissible / annihilator ---------------------------------------------------------

def run_syn_admissible(doc, opt):
    from .scalars import EigenData, is_admissible, weil_admissibility
    P = parse_poly(_req(doc, "P"), "P")
    r, d, p = (_int(_req(doc, k), k) for k in ("r", "d", "p"))
    f = _int(doc.get("f", 1), "f")
    hk1 = None
    if "hk1" in doc:
        M = _qmat(doc["hk1"], "hk1")
        hk1 = EigenData([[la.to_fraction(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())])
    v = is_admissible(P, r, d, f, hk1=hk1, p=p)
    w = weil_admissibility(P, r, d, f, p)
    return {"P": io.poly_to(P), "r": r, "d": d, "f": f, "p": p,
            "is_admissible": {"ok": v.ok, "reason": v.reason},
            "weil_admissibility": {"ok": w.ok, "reason": w.reason}}


def run_syn_annihilator(doc, opt):
    from .scalars import EigenData, annihilator_poly
    blocks = _req(doc, "blocks")
    if not isinstance(blocks, list) or not blocks:
        raise ParseError("blocks is a nonempty list of square matrices", "blocks")
    eds = []
    for k, b in enumerate(blocks):
        M = _qmat(b, "blocks/%d" % k)
        if M.nrows() != M.ncols():
            raise ParseError("block is not square", "blocks/%d" % k)
        eds.append(EigenData([[la.to_fraction(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]))
    m = _int(doc.get("f", 1), "f")
    try:
        P = annihilator_poly(eds, m)
    except ValueError as e:
        raise InvariantViolation(str(e))
    body = {"f": m, "P": io.poly_to(P), "constant_term_one": P[0] == 1}
    if "p" in doc and "d" in doc:
        from .scalars import is_admissible
        p, d = _int(doc["p"], "p"), _int(doc["d"], "d")
        v = is_admissible(P, d + 1, d, m, p=p)
        body["admissible_at_r_d_plus_1"] = {"ok": v.ok, "reason": v.reason}
    return body


# -- koszul check ----------------------------------------------------------------------

def parse_koszul(doc):
    from .koszul import KoszulModule, LogAlgebra
    n = _int(_req(doc, "variables"), "variables")
    n0 = _int(_req(doc, "log_count"), "log_count")
    N = _int(_req(doc, "truncation"), "truncation")
    k = _int(_req(doc, "module_rank"), "module_rank")
    try:
        alg = LogAlgebra(n, n0, N)
    except ValueError as e:
        raise ParseError(str(e), "log_count")
    A = _req(doc, "A_matrices")
    if not isinstance(A, list) or len(A) != n:
        raise ParseError("need one connection matrix per variable", "A_matrices")
    out = []
    for i, Ai in enumerate(A):
        if not isinstance(Ai, list) or len(Ai) != k or any(not isinstance(r, list) or len(r) != k for r in Ai):
            raise ParseError("connection matrix must be %dx%d" % (k, k), "A_matrices/%d" % i)
        rows = []
        for a, row in enumerate(Ai):
            rr = []
            for b, f in enumerate(row):
                path = "A_matrices/%d/%d/%d" % (i, a, b)
                if not isinstance(f, dict):
                    raise ParseError("entry is a polynomial {\"e1,...,en\": coefficient}", path)
                poly = {}
                for key, c in f.items():
                    try:
                        e = tuple(int(s) for s in key.split(","))
                    except ValueError:
                        raise ParseError("bad exponent %r" % key, path) from None
                    if len(e) != n or min(e) < 0:
                        raise ParseError("exponent %r needs %d non-negative entries" % (key, n), path)
                    v = io.parse_rat(c, path + "/" + key)
                    if v:
                        poly[e] = la.q(v)
                rr.append(poly)
            rows.append(rr)
        out.append(rows)
    return KoszulModule(alg, k, out)


def koszul_to(KM):
    def poly(f):
        return {",".join(map(str, e)): rat(v) for e, v in sorted(f.items())}
    return {"variables": KM.alg.n, "log_count": KM.alg.n_log, "truncation": KM.alg.N,
            "module_rank": KM.rank, "A_matrices": [[[poly(f) for f in row] for row in Ai] for Ai in KM.A]}


def run_koszul_check(doc, opt):
    from .koszul import CommutationError, KoszulModule, acyclicity_check
    KM = parse_koszul(doc)
    if opt.trunc is not None:
        from .koszul import LogAlgebra
        KM = KoszulModule(LogAlgebra(KM.alg.n, KM.alg.n_log, opt.trunc), KM.rank, KM.A)
    S = opt.ideal if opt.ideal is not None else doc.get("ideal", list(range(KM.alg.n_log)))
    try:
        KM.check_commutation()
    except CommutationError as e:
        raise ValidationError(str(e), "A_matrices")
    try:
        v = acyclicity_check(KM, S)
    except ValueError as e:
        raise ParseError(str(e), "ideal")
    return {"ideal": list(S), "truncation": v.truncation, "homology": _dims(v.homology),
            "acyclic": v.acyclic, "nilpotent_residues": v.nilpotent_residues}


# -- padic invert ------------------------------------------------------------------------

def _ring_elem(R, v, path):
    if not isinstance(v, dict):
        raise ParseError("ring element is {\"a1,..,ar|b1,..,br\": coefficient}", path)
    terms = {}
    for key, c in v.items():
        try:
            a, b = key.split("|")
            a = tuple(int(s) for s in a.split(",")) if a else ()
            b = tuple(int(s) for s in b.split(",")) if b else ()
        except ValueError:
            raise ParseError("bad monomial %r" % key, path) from None
        if len(a) != R.r or len(b) != R.r:
            raise ParseError("monomial %r needs %d Z- and %d T-exponents" % (key, R.r, R.r), path)
        terms[(a, b)] = io.parse_rat(c, path + "/" + key)
    return R.elem(terms)


def _ring_to(x):
    return {"%s|%s" % (",".join(map(str, a)), ",".join(map(str, b))): rat(c) for (a, b), c in sorted(x.items())}


def run_padic_invert(doc, opt):
    from .padic import NotInIdeal, PrecisionExhausted, TruncPadicModule, TruncRing, p_phi_invert
    p, n, r = (_int(_req(doc, k), k) for k in ("p", "n", "r"))
    M = opt.precision if opt.precision is not None else _int(_req(doc, "M"), "M")
    D = opt.trunc if opt.trunc is not None else _int(_req(doc, "D"), "D")
    try:
        R = TruncRing(p, n, r, M, D)
    except ValueError as e:
        raise ParseError(str(e), "")
    phi = _req(doc, "phi")
    if not isinstance(phi, list) or any(not isinstance(row, list) or len(row) != len(phi) for row in phi):
        raise ParseError("phi is a square matrix of ring elements", "phi")
    A = [[_ring_elem(R, e, "phi/%d/%d" % (i, j)) for j, e in enumerate(row)] for i, row in enumerate(phi)]
    try:
        M0 = TruncPadicModule(R, A)
    except ValueError as e:
        raise ValidationError(str(e), "phi")
    P = parse_poly(_req(doc, "P"), "P")
    t = _req(doc, "target")
    if not isinstance(t, list) or len(t) != M0.k:
        raise ParseError("target needs %d ring elements" % M0.k, "target")
    target = [_ring_elem(R, e, "target/%d" % j) for j, e in enumerate(t)]
    try:
        rep = p_phi_invert(M0, P, target, report=True)
    except NotInIdeal as e:
        raise ValidationError(str(e), "target")
    except (PrecisionExhausted, ArithmeticError) as e:
        raise InvariantViolation(str(e))
    return {"ring": {"p": p, "n": n, "r": r, "M": M, "D": D}, "P": io.poly_to(P),
            "y": [_ring_to(R.clean(c)) for c in rep.y], "m": rep.m, "h": rep.h,
            "series_terms": rep.series_terms, "residual_zero": rep.residual_zero}


# -- specseq pages ---------------------------------------------------------------------

def run_specseq_pages(doc, opt):
    from .homcore import SpectralSequence
    D = io.parse_double(doc.get("double", doc), "double" if "double" in doc else "")
    SS = SpectralSequence(D)
    up_to = int(opt.extra.get("pages", doc.get("pages", 0)) or (SS.width + 2))
    pages = SS.pages(up_to)
    inf = {}
    for (p, q) in SS.bidegrees():
        k = SS.infinity_page(p, q).dim
        if k:
            inf[(p, q)] = k
    fmt = lambda pg: {"%d,%d" % k: v for k, v in sorted(pg.items())}
    body = {"pages": {str(r): fmt(pg) for r, pg in pages.items()}, "infinity": fmt(inf),
            "abutment_ok": SS.check_abutment(), "total_betti": _dims(D.total().betti())}
    if not all(SS.check_page_cohomology(r) for r in range(1, up_to)) or not body["abutment_ok"]:
        raise InvariantViolation("spectral sequence consistency check failed", body)
    return body


OPS = {
    "syn.compute": run_syn_compute,
    "syn.trace": run_syn_trace,
    "syn.pair": run_syn_pair,
    "syn.gysin": run_syn_gysin,
    "syn.admissible": run_syn_admissible,
    "syn.annihilator": run_syn_annihilator,
    "koszul.check": run_koszul_check,
    "padic.invert": run_padic_invert,
    "specseq.pages": run_specseq_pages,
}

# parse-only front halves for the pre-run validation pass of a manifest
_PARSERS = {
    "syn.compute": _parse_syn,
    "syn.trace": _parse_syn,
    "koszul.check": parse_koszul,
    "specseq.pages": lambda d: io.parse_double(d.get("double", d)),
}


def run_op(op, doc, options=None):
    """(exit code, report) for one operation; never raises for input problems."""
    opt = options if isinstance(options, Options) else Options.from_dict(options)
    fn = OPS.get(op)
    if fn is None:
        return EXIT_PARSE, io.report(op, {"status": "parse_error",
                                          "error": {"msg": "unknown operation", "path": "op"}})
    try:
        body = fn(doc, opt)
        return EXIT_OK, io.report(op, dict(body, status="ok"))
    except ParseError as e:
        return EXIT_PARSE, io.report(op, {"status": "parse_error", "error": {"msg": e.msg, "path": e.path}})
    except ValidationError as e:
        return EXIT_INVARIANT, io.report(op, {"status": "invariant_violation",
                                              "error": {"msg": e.msg, "path": e.where}})
    except InvariantViolation as e:
        return EXIT_INVARIANT, io.report(op, dict(e.body, status="invariant_violation",
                                                  error={"msg": str(e), "path": ""}))
    except NotImplementedError as e:
        return EXIT_INVARIANT, io.report(op, {"status": "unsupported", "error": {"msg": str(e), "path": ""}})


# -- manifests -----------------------------------------------------------------------------

def _load_input(job, base):
    src = job.get("input")
    if isinstance(src, dict):
        return src
    if not isinstance(src, str):
        raise ParseError("input is a path or an inline document", "input")
    path = src if os.path.isabs(src) else os.path.join(base, src)
    try:
        return io.load_file(path)
    except OSError as e:
        raise ParseError("cannot read %s (%s)" % (src, e.strerror), "input")


def _job_entry(args):
    op, doc, options = args
    return run_op(op, doc, options)


def run_manifest(manifest, base_dir=".", parallel=1, write=True):
    """Run every job; the bundle lists reports in manifest order whatever the parallelism.

    Inputs are loaded and parsed up front so a malformed job is reported before
    anything runs; it is then skipped and the remaining jobs still execute.
    """
    if not isinstance(manifest, dict) or not isinstance(manifest.get("jobs", None), list):
        raise ParseError("manifest is {\"jobs\": [...]}", "jobs")
    prepared, results = [], {}
    for k, job in enumerate(manifest["jobs"]):
        try:
            if not isinstance(job, dict) or "op" not in job:
                raise ParseError("job needs 'op'", "jobs/%d" % k)
            if job["op"] not in OPS:
                raise ParseError("unknown operation %r" % job["op"], "jobs/%d/op" % k)
            doc = _load_input(job, base_dir)
            pre = _PARSERS.get(job["op"])
            if pre is not None:
                pre(doc)
            prepared.append((k, (job["op"], doc, job.get("options", {}))))
        except (ParseError, ValidationError) as e:
            code = EXIT_PARSE if isinstance(e, ParseError) else EXIT_INVARIANT
            op = job.get("op", "?") if isinstance(job, dict) else "?"
            results[k] = (code, io.report(op, {"status": "parse_error" if code == EXIT_PARSE else "invariant_violation",
                                               "error": {"msg": e.msg, "path": getattr(e, "path", getattr(e, "where", ""))}}))
    args = [a for _, a in prepared]
    if parallel > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            outs = list(ex.map(_job_entry, args))
    else:
        outs = [_job_entry(a) for a in args]
    for (k, _), out in zip(prepared, outs):
        results[k] = out
    bundle = []
    for k, job in enumerate(manifest["jobs"]):
        code, rep = results[k]
        entry = {"index": k, "op": rep["kind"], "exit": code, "report": rep}
        out = job.get("output") if isinstance(job, dict) else None
        if write and out:
            path = out if os.path.isabs(out) else os.path.join(base_dir, out)
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(io.dumps(rep))
            entry["output"] = out
        bundle.append(entry)
    return io.report("bundle", {"jobs": bundle, "failed": sum(1 for e in bundle if e["exit"])})
