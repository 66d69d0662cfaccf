"""Regenerate the input documents and golden outputs under tests/data.

Run from the repository root after an intentional change of output format:

    python scripts/make_golden.py

Inputs are written only if missing, so hand edits survive; goldens are
always rewritten. Review the diff before committing.
"""
import os
import random
import sys

from synpoly import io, jobs, linalg as la
from synpoly.gen import random_koszul_module
from synpoly.synengine import models

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "tests", "data")

# written by hand: non-reduced rationals and omitted zero blocks on purpose
POINT = {
    "field": {"p": 3},
    "C_an": {"dims": {"0": 1}, "Phi": {"0": [["2/2"]]}, "N": {"0": [["0"]]}},
    "C_dR": {"dims": {"0": 1}, "fil": {"0": {"0": [["1"]]}, "1": {}}},
    "gamma": {"0": [[1]]},
    "name": "pt",
}


def inputs():
    h1 = (la.mat([[1, 1], [-1, 2]]), la.mat([[1], [0]]))
    curve = models.curve_point_bundle(3, h1).Gp
    docs = {
        "point.json": POINT,
        "curve_log.json": io.package_to(curve),
        "syn_compute_point.json": {"package": POINT, "P": ["1", "-1/3"], "r": 1},
        "syn_trace_point.json": {"package": POINT, "P": ["1", "1/5"], "r": 1, "top": 0,
                                 "trace": [["1"]], "certificate": "is_admissible"},
        "syn_pair_curve.json": {"model": "unit_curve", "p": 3, "P1": ["1", "1/5"], "r1": 2,
                                "P2": ["1", "-1"], "r2": 0, "trace": [["1"]],
                                "certificate": "is_admissible"},
        "syn_gysin_curve.json": {"model": "curve_point", "p": 3, "P": ["1", "1/5"], "r": 2, "i": 3,
                                 "adjunction": {"P2": ["1", "-1"], "r2": 0, "which": "first"}},
        "syn_admissible.json": {"P": ["1", "-1/9"], "r": 2, "d": 1, "p": 3},
        "syn_annihilator.json": {"blocks": [[["2", "1"], ["0", "3"]]], "f": 2, "p": 5, "d": 0},
        "koszul_nilpotent.json": jobs.koszul_to(random_koszul_module(random.Random(4), n=2, n_log=1,
                                                                      rank=2, N=3)),
        "padic_geometric.json": {"p": 3, "n": 2, "r": 1, "M": 6, "D": 12, "phi": [[{"0|0": "1"}]],
                                 "P": ["1", "-1"], "target": [{"1|0": "1"}]},
        "specseq_square.json": {"double": {"dims": {"0,0": 1, "1,0": 1, "0,1": 1, "1,1": 1},
                                           "d1": {"0,0": [["1"]]}}},
    }
    return docs


MANIFEST = {"jobs": [
    {"op": "syn.compute", "input": "syn_compute_point.json"},
    {"op": "syn.trace", "input": "syn_trace_point.json"},
    {"op": "syn.pair", "input": "syn_pair_curve.json"},
    {"op": "syn.gysin", "input": "syn_gysin_curve.json"},
    {"op": "syn.admissible", "input": "syn_admissible.json"},
    {"op": "syn.annihilator", "input": "syn_annihilator.json"},
    {"op": "koszul.check", "input": "koszul_nilpotent.json"},
    {"op": "padic.invert", "input": "padic_geometric.json"},
    {"op": "specseq.pages", "input": "specseq_square.json"},
]}


def main():
    os.makedirs(DATA, exist_ok=True)
    docs = inputs()
    docs["manifest.json"] = MANIFEST
    for name, doc in docs.items():
        path = os.path.join(DATA, name)
        if not os.path.exists(path):
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(io.dumps(doc))
    goldens = {
        "point.canonical.json": io.canonical(io.load_file(os.path.join(DATA, "point.json"))),
        "manifest.golden.json": io.dumps(jobs.run_manifest(io.load_file(os.path.join(DATA, "manifest.json")),
                                                           DATA, write=False)),
    }
    for name, text in goldens.items():
        with open(os.path.join(DATA, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    print("wrote %d inputs and %d goldens to %s" % (len(docs), len(goldens), os.path.normpath(DATA)))


if __name__ == "__main__":
    sys.exit(main())
