"""Verification suites.  Each suite returns a list of check records

    {"id", "theorem", "pass", "counts", "witness", "ms"}

and everything in a record except "ms" is a deterministic function of the tower.
"""

from __future__ import annotations

import itertools
import time
from functools import cached_property

from . import bruckbose as bb
from . import covers as cv
from . import subplane as sp
from .gf import FieldTower
from .pg import INF, GeometryError, is_partition, is_regular_spread, mat_mul, regulus_triples

SUITES = ("fields", "spread", "subplane", "quadrics", "tangents", "covers", "transversals",
          "carriers", "disjoint", "sublines", "special-conics", "replacement")
HEAVY = ("sublines", "special-conics")

# transversal search is run up to this q; above it only closed forms are checked
SEARCH_MAX_Q = 3


def default_suites(q: int) -> list[str]:
    if q >= 5:
        return [s for s in SUITES if s not in HEAVY]
    return list(SUITES)


def jsonable(x):
    """Labels and points in report-friendly form (INF -> "inf")."""
    if x == INF:
        return "inf"
    if isinstance(x, (list, tuple)):
        return [jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


class Workspace:
    """Lazily built objects shared by the suites for one tower."""

    def __init__(self, tower: FieldTower):
        self.tower = tower

    @cached_property
    def ctx(self):
        return bb.BBContext(self.tower)

    @cached_property
    def B(self):
        return sp.build_subplane(self.ctx)

    @cached_property
    def splash(self):
        return sp.splash_of(self.B)

    @cached_property
    def covers(self):
        return cv.covers_of_splash(self.ctx, self.splash)

    @cached_property
    def forms(self):
        return sp.nine_quadrics(self.B)

    @cached_property
    def reguli(self):
        return cv.enumerate_splash_reguli(self.ctx, self.splash)

    @cached_property
    def classes(self):
        T, C = self.covers
        return [cv.classify_subline_regulus(R, T, C) for R in self.reguli]


class Suite:
    def __init__(self, ws: Workspace, timing: bool = False):
        self.ws = ws
        self.timing = timing
        self.checks: list[dict] = []

    def check(self, cid: str, theorem: str, fn):
        t0 = time.perf_counter()
        try:
            ok, counts, witness = fn()
        except Exception as exc:  # a hard failure inside a check is a failed check
            ok, counts, witness = False, {}, f"{type(exc).__name__}: {exc}"
        ms = round((time.perf_counter() - t0) * 1000, 1) if self.timing else None
        self.checks.append({
            "id": cid,
            "theorem": theorem,
            "pass": bool(ok),
            "counts": jsonable(counts),
            "witness": None if ok else jsonable(witness),
            "ms": ms,
        })


# -- suites ------------------------------------------------------------------

def suite_fields(s: Suite):
    T = s.ws.tower
    E, F = T.ext, T.base
    q = T.q

    def frobenius():
        bad = [a for a in E.elements() if T.frob(a) != E.pow(a, q)]
        N = T.frobenius_matrix()
        N3 = mat_mul(N, mat_mul(N, N, F), F)
        ident = N3 == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        return not bad and ident, {"elements": E.order, "N_cubed_identity": ident}, bad[:1]

    def norm():
        bad = [a for a in E.nonzero() if not T.in_base(T.norm(a)) or T.norm(a) == 0]
        image = {T.norm(a) for a in E.nonzero()}
        return not bad and len(image) == q - 1, {"image": len(image), "expected": q - 1}, bad[:1]

    def labels():
        K = set(T.splash_labels)
        ker = {k for k in E.nonzero() if E.pow(k, q * q + q + 1) == 1}
        img = {E.pow(x, q - 1) for x in E.nonzero()}
        n = q * q + q + 1
        return K == ker == img and len(K) == n, {"labels": len(K), "expected": n}, sorted(K ^ ker)[:3]

    def frame():
        f = T.frame
        A = f.A
        taus = [T.tau_pow(c) for c in range(3)]
        eta = E.dot(A, taus)
        bad = []
        for k in E.nonzero():
            kA = tuple(E.mul[k][a] for a in A)
            if T.mat_vec(T.mult_matrix(k), A, E) != kA:
                bad.append(k)
        return eta == f.eta and not bad, {"checked": E.order - 1}, bad[:1]

    s.check("fields.frobenius", "Frobenius", frobenius)
    s.check("fields.norm", "norm", norm)
    s.check("fields.splash-labels", "splash label group", labels)
    s.check("fields.frame", "transversal frame", frame)


def suite_spread(s: Suite):
    ctx = s.ws.ctx
    T = ctx.tower

    def partition():
        ok = is_partition(list(ctx.spread.values()))
        return ok, {"planes": len(ctx.spread), "expected": T.Q + 1}, None

    def labels():
        bad = []
        for k, P in ctx.spread.items():
            for v in P.points():
                if ctx.label_of(v) != k:
                    bad.append(k)
                    break
        return not bad, {"planes": len(ctx.spread)}, bad[:1]

    def regular():
        w: list = []
        ok = is_regular_spread(list(ctx.spread.values()), w)
        return ok, {"triples": len(regulus_triples(T.Q + 1, T.q))}, w

    def transversals():
        lines = bb.spread_transversals(ctx)
        E = ctx.E
        missed = []
        for k in ctx.labels:
            X = ctx.A1 if k == INF else tuple(E.add[E.mul[k][a]][b] for a, b in zip(ctx.A1, ctx.A2))
            if not ctx.spread[k].extend(E).contains(X):
                missed.append(k)
        counts = {"labels": len(ctx.labels)}
        if T.q <= SEARCH_MAX_Q:
            found = bb.transversal_search([P.extend(E) for P in ctx.spread.values()])
            counts["search"] = len(found)
            if set(found) != set(lines):
                return False, counts, "search disagrees with the closed form"
        return not missed, counts, missed[:1]

    s.check("spread.partition", "regular spread", partition)
    s.check("spread.labels", "regular spread", labels)
    s.check("spread.regular", "regular spread", regular)
    s.check("spread.transversals", "spread transversals", transversals)


def suite_subplane(s: Suite):
    ws = s.ws
    T = ws.tower
    n = T.q ** 2 + T.q + 1

    def build():
        B = ws.B
        inc = all(len(B.lines_through(i)) == T.q + 1 for i in range(len(B.points)))
        return len(B.points) == n and inc, {"points": len(B.points), "lines": len(B.lines), "expected": n}, None

    def splash():
        S = ws.splash
        return (len(S) == n and S.carriers == (INF, 0),
                {"splash": len(S), "expected": n, "carriers": list(S.carriers)}, None)

    def pencils():
        regs = {sp.pencil_regulus(ws.B, i).labels for i in range(len(ws.B.points))}
        inside = all(set(r) <= set(ws.splash.labels) for r in regs)
        return len(regs) == n and inside, {"pencil_reguli": len(regs), "expected": n}, None

    def cubics():
        B = ws.B
        bad = []
        for j in range(len(B.lines)):
            pts = B.points_on(j)
            N = sp.cubic_through(B, pts[0], j)
            got = set(N.points())
            want = {B.bb_points[i] for i in pts}
            if got != want or not bb.is_special_cubic(N, bb.spread_transversals(ws.ctx)):
                bad.append(j)
        return not bad, {"cubics": len(B.lines)}, bad[:1]

    s.check("subplane.build", "exterior subplane", build)
    s.check("subplane.splash", "splash closed form", splash)
    s.check("subplane.pencils", "pencil sublines", pencils)
    s.check("subplane.cubics", "special twisted cubics", cubics)


def suite_quadrics(s: Suite):
    ws = s.ws

    def scan():
        rep: dict = {}
        forms = sp.nine_quadrics(ws.B, rep)
        r = sp.scan_affine(ws.B, forms)
        ok = not r["extra"] and not r["missing"] and r["zeros"] == r["subplane_points"]
        counts = {"forms": len(forms), "scanned": r["scanned"], "zeros": r["zeros"],
                  "subplane_points": r["subplane_points"],
                  "duplicate_triple": rep["duplicate_triple_matches"]}
        return ok, counts, (r["extra"] + r["missing"])[:1]

    def at_infinity():
        # reported only
        n = sp.count_zeros_at_infinity(ws.forms, ws.tower.base)
        return True, {"zeros_at_infinity": n}, None

    s.check("quadrics.affine-scan", "nine quadrics", scan)
    s.check("quadrics.at-infinity", "nine quadrics", at_infinity)


def suite_tangents(s: Suite):
    ws = s.ws

    def both():
        B = ws.B
        T, _ = ws.covers
        bad, labels = [], []
        for i in range(len(B.points)):
            a = sp.tangent_plane(B, ws.forms, i)
            b = sp.tangent_plane_via_cubics(B, i)
            if a != b:
                bad.append(i)
            labels.append(sp.cover_label_of(sp.tangent_trace(a), T.planes))
        bij = None not in labels and len(set(labels)) == len(B.points)
        return (not bad and bij,
                {"points": len(B.points), "distinct_cover_planes": len(set(labels) - {None})},
                [B.points[i] for i in bad[:1]] or labels)

    s.check("tangents.routes-and-bijection", "tangent planes", both)


def suite_covers(s: Suite):
    ws = s.ws
    ctx = ws.ctx
    n = ctx.q ** 2 + ctx.q + 1

    def axioms():
        T, C = ws.covers
        r = cv.check_cover_axioms([ws.splash.planes, T.planes, C.planes])
        sizes = r["point_sets"]
        ok = r["pass"] and sizes == [n * n] * 3
        return ok, {"point_sets": sizes, "expected": n * n}, r["witness"]

    def carriers_shared():
        fams = [cv.family(ctx, (0, INF), k) for k in cv.Kind]
        ok = all(f == fams[0] for f in fams)
        return ok, {}, None

    def theta():
        E, T = ctx.E, ctx.tower
        th = cv.theta_sigma(ctx)
        Tc, Cc = ws.covers
        fixed = all(th(P) == P for P in ctx.spread.values())
        cm = E.div(T.tau, T.frob(T.tau, 1))
        tm = E.div(T.tau, T.frob(T.tau, 2))
        cok = all(th(Cc.planes[k]) == Cc.planes[E.mul[cm][k]] for k in Cc.labels)
        tok = all(th(Tc.planes[k]) == Tc.planes[E.mul[tm][k]] for k in Tc.labels)
        orbits = []
        for cov in (Tc, Cc):
            orb = [cov.planes[cov.labels[0]]]
            while len(orb) <= n:
                nxt = th(orb[-1])
                if nxt == orb[0]:
                    break
                orb.append(nxt)
            orbits.append(len(orb))
        ok = fixed and cok and tok and orbits == [n, n]
        return ok, {"fixes_spread": fixed, "conic_map": cok, "tangent_map": tok,
                    "orbits": orbits, "expected": n}, None

    s.check("covers.axioms", "covers", axioms)
    s.check("covers.carriers-shared", "covers", carriers_shared)
    s.check("covers.theta", "cyclic homography", theta)


def suite_transversals(s: Suite):
    ws = s.ws
    ctx = ws.ctx
    T, C = ws.covers
    covs = [cv.splash_cover(ws.splash), T, C]

    for cov in covs:
        name = cov.kind.name.lower()

        def marked(cov=cov):
            bad = cv.marked_points_ok(ctx, cov)
            return not bad, {"labels": len(cov.labels)}, bad[:1]

        s.check(f"transversals.marked.{name}", "transversal coordinates", marked)

    if ctx.q <= SEARCH_MAX_Q:
        for cov in covs:
            name = cov.kind.name.lower()

            def search(cov=cov):
                found = cv.search_transversals(ctx, cov)
                want = cv.cover_lines(ctx, cov.kind)
                ok = len(found) == 3 and set(found) == set(want)
                return ok, {"found": len(found), "expected": 3}, [str(L) for L in found[:3]]

            s.check(f"transversals.search.{name}", "transversal uniqueness", search)

    def nine():
        lines = [L for _, _, L in cv.nine_transversals(ctx)]
        return len(set(lines)) == 9, {"distinct": len(set(lines))}, None

    s.check("transversals.nine-distinct", "nine transversals", nine)


def suite_carriers(s: Suite):
    ctx = s.ws.ctx

    def carriers():
        found = cv.carrier_characterisation(ctx)
        return found == [0, INF], {"planes_scanned": len(ctx.labels), "meeting_all_nine": len(found)}, found

    s.check("carriers.nine-transversals", "carrier characterisation", carriers)


def suite_disjoint(s: Suite):
    ctx = s.ws.ctx

    def disjoint():
        r = cv.disjoint_splash_report(ctx)
        return r["pass"], {"splashes": r["splashes"], "labels": r["labels"], "expected": ctx.tower.Q + 1,
                           "partition": r["partition"]}, r["missed"][:1]

    s.check("disjoint.cosets", "disjoint splashes", disjoint)


def suite_sublines(s: Suite):
    ws = s.ws
    n = ws.tower.q ** 2 + ws.tower.q + 1

    def enumerate_():
        cls = ws.classes
        pen = sum(c.value is cv.SublineClass.PENCIL for c in cls)
        dual = sum(c.value is cv.SublineClass.DUAL_CONIC for c in cls)
        nonuni = [c.labels for c in cls if not c.uniform]
        ok = len(cls) == 2 * n and pen == n and dual == n and not nonuni
        counts = {"reguli": len(cls), "expected": 2 * n, "pencil": pen, "dual_conic": dual,
                  "non_uniform": len(nonuni)}
        return ok, counts, nonuni[:1]

    def pencils():
        byl = {c.labels: c for c in ws.classes}
        bad = []
        for i in range(len(ws.B.points)):
            R = sp.pencil_regulus(ws.B, i)
            c = byl.get(R.labels)
            if c is None or c.value is not cv.SublineClass.PENCIL or not c.uniform:
                bad.append(R.labels)
        return not bad, {"points": len(ws.B.points)}, bad[:1]

    def dual_from_tangent():
        # u = beta(trace of a tangent plane) lies in a conic-cover plane
        B = ws.B
        T, C = ws.covers
        b = cv.beta(ws.ctx)
        bad = []
        for i in range(len(B.points)):
            u = b(sp.tangent_trace(sp.tangent_plane(B, ws.forms, i)))
            R = cv.dual_conic_regulus(ws.ctx, u, C)
            c = cv.classify_subline_regulus(R, T, C)
            if c.value is not cv.SublineClass.DUAL_CONIC or not c.uniform:
                bad.append(i)
        return not bad, {"points": len(B.points)}, bad[:1]

    s.check("sublines.enumeration", "subline classification", enumerate_)
    s.check("sublines.pencil", "subline classification", pencils)
    s.check("sublines.dual-conic", "subline classification", dual_from_tangent)


def suite_special_conics(s: Suite):
    ws = s.ws
    T, C = ws.covers
    ctx = ws.ctx

    def special():
        tested, bad, wrong = 0, [], 0
        for R, c in zip(ws.reguli, ws.classes):
            if not c.uniform:
                continue
            cov, other = (C, T) if c.value is cv.SublineClass.PENCIL else (T, C)
            for k, P in cov.planes.items():
                tested += 1
                if not cv.is_cover_special_conic(ctx, R, P, cov.transversals):
                    bad.append((c.labels, k))
                if cv.is_cover_special_conic(ctx, R, P, other.transversals):
                    wrong += 1
        counts = {"sections": tested, "special": tested - len(bad), "special_for_other_cover": wrong}
        return not bad and tested > 0, counts, bad[:1]

    def converse():
        # reported only: which conic sections of conic-cover planes are special,
        # split by the class of the regulus they come from
        counts: dict = {}
        for R, c in zip(ws.reguli, ws.classes):
            for P in C.planes.values():
                if cv.cover_plane_section(R, P).kind != "conic":
                    continue
                key = c.value.value if c.uniform else "non-uniform"
                try:
                    r = "special" if cv.is_cover_special_conic(ctx, R, P, C.transversals) else "not-special"
                except GeometryError:
                    r = "no-extended-section"
                counts[f"{key}/{r}"] = counts.get(f"{key}/{r}", 0) + 1
        return True, dict(sorted(counts.items())), None

    s.check("special-conics.extension", "special conics", special)
    s.check("special-conics.converse", "special conics", converse)


def suite_replacement(s: Suite):
    ctx = s.ws.ctx
    choices = list(itertools.product((cv.KEEP, cv.TANGENT, cv.CONIC), repeat=ctx.q - 1))

    def replace():
        bad, regular = [], 0
        for ch in choices:
            r = cv.replace_hyperreguli(ctx, ch)
            uniform = len(set(ch)) == 1
            regular += r.regular
            if r.regular != uniform or not r.partition:
                bad.append(list(ch))
        return not bad, {"choices": len(choices), "regular": regular}, bad[:1]

    s.check("replacement.regularity", "hyper-regulus replacement", replace)


SUITE_FUNCS = {
    "fields": suite_fields,
    "spread": suite_spread,
    "subplane": suite_subplane,
    "quadrics": suite_quadrics,
    "tangents": suite_tangents,
    "covers": suite_covers,
    "transversals": suite_transversals,
    "carriers": suite_carriers,
    "disjoint": suite_disjoint,
    "sublines": suite_sublines,
    "special-conics": suite_special_conics,
    "replacement": suite_replacement,
}


_WORKSPACES: dict[str, Workspace] = {}


def workspace(token: str) -> Workspace:
    ws = _WORKSPACES.get(token)
    if ws is None:
        ws = _WORKSPACES[token] = Workspace(FieldTower.from_token(token))
    return ws


def run_suite(token: str, name: str, timing: bool = False) -> dict:
    s = Suite(workspace(token), timing)
    SUITE_FUNCS[name](s)
    return {"name": name, "checks": s.checks}


def run(tower: FieldTower, suites, jobs: int = 1, timing: bool = False) -> dict:
    token = tower.token()
    names = [n for n in SUITES if n in set(suites)]
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_suite, [token] * len(names), names, [timing] * len(names)))
    else:
        results = [run_suite(token, n, timing) for n in names]
    ok = all(c["pass"] for r in results for c in r["checks"])
    return {"q": tower.q, "tower": token, "suites": results, "pass": ok}
