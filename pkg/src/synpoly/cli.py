"""Command line: ``synpoly {syn,koszul,padic,specseq,run} ...``.

Every command reads one JSON document (a path or ``-`` for stdin), prints a
canonical JSON report and exits 0 on success, 1 on an invariant violation and
2 on a parse or shape error.
"""
import sys

import click

from . import io, jobs


def _read(path):
    if path == "-":
        return io.loads(sys.stdin.read())
    return io.load_file(path)


def _emit(op, path, options, table=None):
    try:
        doc = _read(path)
    except io.ParseError as e:
        code, rep = jobs.EXIT_PARSE, io.report(op, {"status": "parse_error",
                                                     "error": {"msg": e.msg, "path": e.path}})
    except OSError as e:
        code, rep = jobs.EXIT_PARSE, io.report(op, {"status": "parse_error",
                                                     "error": {"msg": e.strerror or str(e), "path": path}})
    else:
        code, rep = jobs.run_op(op, doc, options)
    if table is not None and rep.get("status") == "ok":
        click.echo(table(rep))
    else:
        click.echo(io.dumps(rep), nl=False)
    if code:
        click.echo("%s: %s" % (rep["status"], rep.get("error", {}).get("msg", "")), err=True)
    sys.exit(code)


def _common(f):
    f = click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for randomized checks.")(f)
    f = click.option("--trunc", type=int, default=None, help="Degree truncation (padic, koszul).")(f)
    f = click.option("--precision", type=int, default=None, help="p-adic precision exponent M.")(f)
    return f


def _opts(seed, trunc, precision, **extra):
    return jobs.Options(seed=seed, trunc=trunc, precision=precision,
                        ideal=extra.pop("ideal", None), extra=extra)


@click.group()
@click.version_option(package_name="synpoly")
def main():
    """Exact syntomic-cohomology computations on finite-dimensional packages."""


@main.group()
def syn():
    """Syntomic complexes of geometric packages."""


def _syn_command(name, helptext):
    @syn.command(name, help=helptext)
    @click.argument("document", type=click.Path(allow_dash=True))
    @_common
    def cmd(document, seed, trunc, precision):
        _emit("syn." + name, document, _opts(seed, trunc, precision))
    return cmd


_syn_command("compute", "Dimensions of H, F0 and F1 in every degree, with exactness and E2 agreement.")
_syn_command("trace", "Trace on top syntomic cohomology (needs an explicit certificate).")
_syn_command("pair", "E2 product matrices and, with a trace, the pairing matrices.")
_syn_command("gysin", "Gysin map of a residue sequence, snake cross-check, optional adjunction.")
_syn_command("admissible", "Admissibility verdicts for (P, r).")
_syn_command("annihilator", "Constant-term-one polynomial killing given Frobenius blocks.")


@main.group()
def koszul():
    """Koszul complexes of log connections."""


def _parse_ideal(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(s) - 1 for s in value.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter("comma-separated 1-based indices of log variables")


@koszul.command("check")
@click.argument("document", type=click.Path(allow_dash=True))
@click.option("--ideal", callback=_parse_ideal, default=None,
              help="Log variables generating the ideal, 1-based, e.g. 1,2 (default: all).")
@_common
def koszul_check(document, ideal, seed, trunc, precision):
    """Homology dimensions of the ideal subcomplex per degree."""
    _emit("koszul.check", document, _opts(seed, trunc, precision, ideal=ideal))


@main.group()
def padic():
    """Truncated p-adic modules over O_{n,r}."""


@padic.command("invert")
@click.argument("document", type=click.Path(allow_dash=True))
@_common
def padic_invert(document, seed, trunc, precision):
    """Solve P(Phi) y = target in mM and report the residual."""
    _emit("padic.invert", document, _opts(seed, trunc, precision))


@main.group()
def specseq():
    """Spectral sequences of double complexes."""


def _pages_table(rep):
    lines = []
    pages = dict(rep["pages"], inf=rep["infinity"])
    keys = sorted({k for pg in pages.values() for k in pg}, key=lambda s: tuple(int(x) for x in s.split(",")))
    lines.append("page  " + "  ".join("%5s" % k for k in keys))
    for r, pg in pages.items():
        lines.append("%-5s " % ("E_" + r) + "  ".join("%5d" % pg.get(k, 0) for k in keys))
    lines.append("conventions: %s" % rep["conventions"])
    return "\n".join(lines)


@specseq.command("pages")
@click.argument("document", type=click.Path(allow_dash=True))
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report instead of a table.")
@click.option("--pages", "npages", type=int, default=None, help="Last finite page to show.")
@_common
def specseq_pages(document, as_json, npages, seed, trunc, precision):
    """Dimensions of E_r^{p,q} as a table (nonzero bidegrees only)."""
    extra = {"pages": npages} if npages else {}
    _emit("specseq.pages", document, _opts(seed, trunc, precision, **extra),
          table=None if as_json else _pages_table)


@main.command("run")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--parallel", "-j", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--no-write", is_flag=True, help="Do not write per-job output files.")
def run(manifest, parallel, no_write):
    """Run a manifest of jobs; prints the bundle, exit 1 if any job failed."""
    import os
    try:
        doc = io.load_file(manifest)
        bundle = jobs.run_manifest(doc, os.path.dirname(os.path.abspath(manifest)), parallel,
                                   write=not no_write)
    except io.ParseError as e:
        click.echo(io.dumps(io.report("bundle", {"status": "parse_error",
                                                 "error": {"msg": e.msg, "path": e.path}})), nl=False)
        sys.exit(jobs.EXIT_PARSE)
    click.echo(io.dumps(bundle), nl=False)
    sys.exit(jobs.EXIT_INVARIANT if bundle["failed"] else jobs.EXIT_OK)


if __name__ == "__main__":
    main()
