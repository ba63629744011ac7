"""Command line entry point: ``python -m splashgeom --q 3``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import covers as cv
from . import subplane as sp
from .gf import SUPPORTED_Q, FieldError, FieldTower, primitive_polys
from .pg import INF
from .verify import SUITES, Workspace, default_suites, run

ARTIFACTS = ("spread", "subplane", "quadrics", "tangents", "covers", "transversals", "classification")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# -- CSV encoding ----------------------------------------------------------------
#
# A GF(q) element is its integer code.  A GF(q^3) element a0 + a1 tau + a2 tau^2
# is written "a0:a1:a2".  Vectors are space separated; labels use "inf".

def enc_base(v) -> str:
    return " ".join(str(x) for x in v)


def enc_ext(tower: FieldTower, v) -> str:
    return " ".join(":".join(str(c) for c in tower.coords(x)) for x in v)


def enc_label(tower: FieldTower, k) -> str:
    return "inf" if k == INF else ":".join(str(c) for c in tower.coords(k))


def dump_rows(ws: Workspace, artifact: str) -> tuple[list[str], list[list]]:
    T = ws.tower
    ctx = ws.ctx
    if artifact == "spread":
        rows = [[enc_label(T, k)] + [enc_base(v) for v in P.basis] for k, P in ctx.spread.items()]
        return ["label", "row0", "row1", "row2"], rows
    if artifact == "subplane":
        B = ws.B
        rows = [[enc_base(b), enc_ext(T, P), enc_base(e)]
                for b, P, e in zip(B.base_points, B.points, B.bb_points)]
        return ["pg2q", "pg2q3", "pg6q"], rows
    if artifact == "quadrics":
        header = [f"q{i}{j}" for i, j in sp.PAIRS]
        return header, [list(f.coeffs) for f in ws.forms]
    if artifact == "tangents":
        B = ws.B
        Tc, _ = ws.covers
        rows = []
        for i, P in enumerate(B.bb_points):
            plane = sp.tangent_plane(B, ws.forms, i)
            lab = sp.cover_label_of(sp.tangent_trace(plane), Tc.planes)
            rows.append([enc_base(P)] + [enc_base(v) for v in plane.basis] + [enc_label(T, lab)])
        return ["point", "row0", "row1", "row2", "tangent_cover_label"], rows
    if artifact == "covers":
        rows = []
        for cov in ws.covers:
            for k in cov.labels:
                rows.append([cov.kind.name.lower(), enc_label(T, k)] +
                            [enc_base(v) for v in cov.planes[k].basis])
        return ["family", "label", "row0", "row1", "row2"], rows
    if artifact == "transversals":
        rows = []
        for kind, i, L in cv.nine_transversals(ctx):
            A2 = ctx.conj(ctx.A2, cv._CONJ[kind])
            rows.append([kind.name.lower(), i, enc_ext(T, ctx.conj(ctx.A1, i)), enc_ext(T, ctx.conj(A2, i))])
        return ["family", "conjugate", "point1", "point2"], rows
    if artifact == "classification":
        rows = []
        for c in ws.classes:
            rows.append([" ".join(enc_label(T, k) for k in c.labels), c.value.value,
                         "yes" if c.uniform else "no", enc_label(T, c.witness) if c.witness is not None else ""])
        return ["labels", "class", "uniform", "witness_label"], rows
    raise ValueError(artifact)


def write_dump(ws: Workspace, artifact: str, out) -> int:
    header, rows = dump_rows(ws, artifact)
    out.write(f"# q={ws.tower.q} tower={ws.tower.token()} artifact={artifact}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return len(rows)


# -- reports ---------------------------------------------------------------------

def format_text(report: dict) -> str:
    lines = [f"q={report['q']} tower={report['tower']}"]
    for s in report["suites"]:
        for c in s["checks"]:
            mark = "PASS" if c["pass"] else "FAIL"
            counts = ", ".join(f"{k}={v}" for k, v in c["counts"].items())
            line = f"  {mark} {c['id']} [{c['theorem']}] {counts}"
            if c["ms"] is not None:
                line += f" ({c['ms']} ms)"
            if not c["pass"]:
                line += f"\n       witness: {c['witness']}"
            lines.append(line)
    lines.append("PASS" if report["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    return format_text(report)


def all_towers(q: int) -> list[FieldTower]:
    return [FieldTower(q, t) for t in primitive_polys(q)]


def outcome(report: dict) -> list:
    return [(s["name"], c["id"], c["pass"]) for s in report["suites"] for c in s["checks"]]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="splashgeom", description=__doc__)
    ap.add_argument("--q", type=int, required=True, help=f"field order, one of {SUPPORTED_Q}")
    ap.add_argument("--poly", help="tower token p^d:basepoly:t0,t1,t2")
    ap.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--out", help="report path (or CSV path with --dump); default stdout")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--all-towers", action="store_true",
                    help="run under every primitive polynomial and compare outcomes")
    ap.add_argument("--dump", choices=ARTIFACTS, help="write one CSV artifact instead of a report")
    ap.add_argument("--timing", action="store_true", help="fill in the ms field of each check")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    try:
        if args.q not in SUPPORTED_Q:
            raise FieldError(f"unsupported q={args.q}; supported: {SUPPORTED_Q}")
        if args.poly:
            tower = FieldTower.from_token(args.poly)
            if tower.q != args.q:
                raise FieldError(f"token {args.poly} is for q={tower.q}, not {args.q}")
        else:
            tower = FieldTower(args.q)
        if args.jobs < 1:
            raise FieldError("--jobs must be positive")
        if args.all_towers and (args.poly or args.dump):
            raise FieldError("--all-towers cannot be combined with --poly or --dump")
    except FieldError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    suites = args.suite or default_suites(args.q)

    try:
        if args.dump:
            buf = io.StringIO()
            write_dump(Workspace(tower), args.dump, buf)
            return _emit(buf.getvalue(), args.out, EXIT_PASS)

        if args.all_towers:
            reports = [run(t, suites, args.jobs, args.timing) for t in all_towers(args.q)]
            invariant = all(outcome(r) == outcome(reports[0]) for r in reports)
            ok = invariant and all(r["pass"] for r in reports)
            if args.format == "json":
                text = json.dumps({"q": args.q, "towers": reports, "invariant": invariant, "pass": ok},
                                  indent=2) + "\n"
            else:
                text = "".join(format_text(r) for r in reports)
                text += f"towers={len(reports)} invariant={invariant}\n"
            return _emit(text, args.out, EXIT_PASS if ok else EXIT_FAIL)

        report = run(tower, suites, args.jobs, args.timing)
        return _emit(render(report, args.format), args.out, EXIT_PASS if report["pass"] else EXIT_FAIL)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _emit(text: str, path, code: int) -> int:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
