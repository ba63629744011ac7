"""Tangent and conic covers of the splash, their transversals, carriers,
coset splashes, hyper-regulus replacement and the two classes of sublines."""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .bruckbose import (BBContext, label_key, spread_label, spread_plane, subline_through,
                        subline_to_regulus, transversal_search)
from .pg import (INF, GeometryError, Homography, Regulus, Subspace, Vector, block_diag,
                 combine, is_partition, is_regular_spread, line_meets, nullspace, rank)
from .subplane import Splash, coset_labels, make_splash

log = logging.getLogger(__name__)


class Kind(enum.Enum):
    SPLASH = 0
    TANGENT = 1
    CONIC = 2


# the marked point of a transversal on plane k is k A1 + coeff * A2^(q^j)
_CONJ = {Kind.SPLASH: 0, Kind.TANGENT: 2, Kind.CONIC: 1}


@dataclass
class Cover:
    kind: Kind
    labels: tuple
    planes: dict
    transversals: tuple = ()
    marked: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.labels)

    def point_set(self) -> set:
        out = set()
        for P in self.planes.values():
            out.update(P.points())
        return out


def beta(ctx: BBContext) -> Homography:
    """([x], [y]) -> ([x], [y^q]) on Sigma_inf."""
    I = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    return Homography.of(ctx.F, block_diag(I, ctx.tower.frobenius_matrix()))


def theta(ctx: BBContext) -> Homography:
    """diag(M_tau, M_tau, 1) on PG(6,q)."""
    M = ctx.tower.mult_matrix(ctx.tower.tau)
    return Homography.of(ctx.F, block_diag(M, M, ((1,),)))


def theta_sigma(ctx: BBContext) -> Homography:
    """Theta restricted to Sigma_inf, in PG(5) coordinates."""
    M = ctx.tower.mult_matrix(ctx.tower.tau)
    return Homography.of(ctx.F, block_diag(M, M))


def family(ctx: BBContext, labels: Sequence, kind: Kind) -> dict:
    return {k: spread_plane(ctx.tower, k, kind.value) for k in labels}


def check_cover_axioms(families: Sequence[dict]) -> dict:
    """Same point set, disjoint planes within a family, single-point meets across."""
    out = {"point_sets": [], "intra_disjoint": True, "cross_single": True, "witness": None}
    sets = []
    for fam in families:
        pts = []
        for P in fam.values():
            pts.extend(P.points())
        s = set(pts)
        if len(s) != len(pts):
            out["intra_disjoint"] = False
            out["witness"] = out["witness"] or "planes of one family meet"
        sets.append(s)
        out["point_sets"].append(len(s))
    out["same_points"] = all(s == sets[0] for s in sets)
    for f1, f2 in itertools.combinations(families, 2):
        for k1, P1 in f1.items():
            for k2, P2 in f2.items():
                if k1 == k2:
                    continue
                n = P1.meet(P2).dim + 1
                if n != 1:
                    out["cross_single"] = False
                    out["witness"] = out["witness"] or f"labels {k1}, {k2} meet in dimension {n - 1}"
    out["pass"] = out["same_points"] and out["intra_disjoint"] and out["cross_single"]
    return out


def covers_of_splash(ctx: BBContext, S: Splash) -> tuple[Cover, Cover]:
    b = beta(ctx)
    T = {k: b(P) for k, P in S.planes.items()}
    C = {k: b(P) for k, P in T.items()}
    for kind, fam in ((Kind.TANGENT, T), (Kind.CONIC, C)):
        if fam != family(ctx, S.labels, kind):
            raise GeometryError(f"beta does not give the {kind.name.lower()} cover")
    res = check_cover_axioms([S.planes, T, C])
    if not res["pass"]:
        raise GeometryError(f"cover axioms fail: {res['witness']}")
    tc = Cover(Kind.TANGENT, S.labels, T)
    cc = Cover(Kind.CONIC, S.labels, C)
    for cov in (tc, cc):
        cov.transversals = cover_lines(ctx, cov.kind)
        cov.marked = {k: marked_point(ctx, cov.kind, k) for k in cov.labels}
    return tc, cc


def splash_cover(S: Splash) -> Cover:
    return Cover(Kind.SPLASH, S.labels, dict(S.planes))


# -- transversals -----------------------------------------------------------

def cover_lines(ctx: BBContext, kind: Kind) -> tuple[Subspace, Subspace, Subspace]:
    """g and its two conjugates for the family of the given kind."""
    A2 = ctx.conj(ctx.A2, _CONJ[kind])
    return tuple(Subspace.span(ctx.E, 5, [ctx.conj(ctx.A1, i), ctx.conj(A2, i)]) for i in range(3))


def marked_coefficient(ctx: BBContext, kind: Kind) -> int:
    """eta^(1 - q^j) with j the conjugation applied to A2."""
    E, tower = ctx.E, ctx.tower
    eta = ctx.frame.eta
    j = _CONJ[kind]
    return E.div(eta, tower.frob(eta, j))


def marked_point(ctx: BBContext, kind: Kind, k) -> Vector:
    if k == INF:
        return ctx.A1
    E = ctx.E
    A2 = ctx.conj(ctx.A2, _CONJ[kind])
    return combine((k, marked_coefficient(ctx, kind)), (ctx.A1, A2), E)


def marked_points_ok(ctx: BBContext, cov: Cover) -> list:
    """Labels whose closed-form marked point misses the extended plane (should be empty)."""
    bad = []
    for k in cov.labels:
        X = marked_point(ctx, cov.kind, k)
        if not cov.planes[k].extend(ctx.E).contains(X):
            bad.append(k)
    return bad


def search_transversals(ctx: BBContext, cov: Cover) -> list[Subspace]:
    planes = [cov.planes[k].extend(ctx.E) for k in cov.labels]
    return transversal_search(planes)


def nine_transversals(ctx: BBContext) -> list[tuple[Kind, int, Subspace]]:
    return [(kind, i, L) for kind in Kind for i, L in enumerate(cover_lines(ctx, kind))]


def carrier_characterisation(ctx: BBContext) -> list:
    """Spread labels whose extended plane meets all nine transversals."""
    lines = [L for _, _, L in nine_transversals(ctx)]
    out = []
    for k in ctx.labels:
        P = ctx.spread[k].extend(ctx.E)
        if all(line_meets(L, P) for L in lines):
            out.append(k)
    return sorted(out, key=label_key)


# -- coset splashes and replacement --------------------------------------------

def disjoint_splashes(ctx: BBContext) -> list[Splash]:
    return [make_splash(ctx, coset_labels(ctx.tower, j)) for j in range(ctx.q - 1)]


def disjoint_splash_report(ctx: BBContext) -> dict:
    splashes = disjoint_splashes(ctx)
    seen: list = []
    for S in splashes:
        seen.extend(S.labels)
    rest = set(ctx.labels) - {0, INF}
    rep = {
        "splashes": len(splashes),
        "labels": len(seen) + 2,
        "partition": len(seen) == len(set(seen)) and set(seen) == rest,
        "missed": [],
    }
    for j, S in enumerate(splashes):
        for kind in (Kind.TANGENT, Kind.CONIC):
            fam = family(ctx, S.labels, kind)
            for i, L in enumerate(cover_lines(ctx, kind)):
                for k, P in fam.items():
                    if not line_meets(L, P.extend(ctx.E)):
                        rep["missed"].append((j, kind.name, i, k))
    rep["pass"] = rep["partition"] and not rep["missed"] and rep["labels"] == ctx.q ** 3 + 1
    return rep


KEEP, TANGENT, CONIC = "keep", "tangent", "conic"


@dataclass
class ReplacementSpread:
    choice: tuple
    planes: tuple
    partition: bool
    regular: bool
    witness: list = field(default_factory=list)


def replace_hyperreguli(ctx: BBContext, choice: Sequence[str]) -> ReplacementSpread:
    if len(choice) != ctx.q - 1:
        raise GeometryError(f"need {ctx.q - 1} selectors")
    kinds = {KEEP: Kind.SPLASH, TANGENT: Kind.TANGENT, CONIC: Kind.CONIC}
    planes = [ctx.spread[INF], ctx.spread[0]]
    for S, c in zip(disjoint_splashes(ctx), choice):
        fam = family(ctx, S.labels, kinds[c])
        planes.extend(fam[k] for k in S.labels)
    ok = is_partition(planes)
    assert ok, "replacement is not a spread"
    witness: list = []
    reg = is_regular_spread(planes, witness)
    return ReplacementSpread(tuple(choice), tuple(planes), ok, reg, witness)


# -- sublines of the splash -------------------------------------------------------

class SublineClass(enum.Enum):
    PENCIL = "Pencil"
    DUAL_CONIC = "DualConic"


@dataclass
class Section:
    kind: str            # "line" or "conic"
    points: tuple
    line: Subspace | None = None


def cover_plane_section(R: Regulus, pi: Subspace) -> Section:
    pts = []
    for P in R.planes:
        X = P.meet(pi)
        if X.dim != 0:
            raise GeometryError(f"cover plane meets a regulus plane in dimension {X.dim}")
        pts.append(X.basis[0])
    F = pi.field
    if len(set(pts)) != len(pts):
        raise GeometryError("section points are not distinct")
    span = Subspace.span(F, 5, pts)
    if span.dim == 1:
        return Section("line", tuple(pts), span)
    if span.dim == 2 and all(rank(t, F) == 3 for t in itertools.combinations(pts, 3)):
        return Section("conic", tuple(pts))
    raise GeometryError("section is neither a line nor an arc")


@dataclass
class Classification:
    labels: tuple
    value: SublineClass
    witness: object        # label of the first cover plane met in a line
    line_planes: tuple     # labels of the cover planes met in lines
    uniform: bool


def classify_subline_regulus(R: Regulus, T: Cover, C: Cover) -> Classification:
    tsec = {k: cover_plane_section(R, P).kind for k, P in T.planes.items()}
    csec = {k: cover_plane_section(R, P).kind for k, P in C.planes.items()}
    first = T.labels[0]
    if tsec[first] == "line":
        value, lines_in, other = SublineClass.PENCIL, tsec, csec
    else:
        value, lines_in, other = SublineClass.DUAL_CONIC, csec, tsec
    uniform = all(v == "line" for v in lines_in.values()) and all(v == "conic" for v in other.values())
    line_planes = tuple(k for k in sorted(lines_in) if lines_in[k] == "line")
    if uniform:
        # every ruling line lies in exactly one line-meeting cover plane
        fam = T if value is SublineClass.PENCIL else C
        rl = set(R.ruling_lines())
        found = {cover_plane_section(R, fam.planes[k]).line for k in line_planes}
        uniform = found == rl
    witness = line_planes[0] if line_planes else None
    return Classification(R.labels or (), value, witness, line_planes, uniform)


def splash_sublines(ctx: BBContext, labels: Sequence) -> list[tuple]:
    """All order-q-sublines of PG(1,q^3) contained in the label set."""
    labels = sorted(labels, key=label_key)
    lab = set(labels)
    found = set()
    for a, b, c in itertools.combinations(labels, 3):
        if any(a in s and b in s and c in s for s in found):
            continue
        sub = subline_through(ctx.tower, a, b, c)
        if set(sub) <= lab:
            found.add(sub)
    return sorted(found, key=lambda s: [label_key(x) for x in s])


def enumerate_splash_reguli(ctx: BBContext, S: Splash) -> list[Regulus]:
    return [subline_to_regulus(ctx, sub) for sub in splash_sublines(ctx, S.labels)]


def dual_conic_regulus(ctx: BBContext, u: Subspace, C: Cover) -> Regulus:
    """Regulus of the splash planes met by a line u lying in a conic-cover plane."""
    if not any(P.contains_subspace(u) for P in C.planes.values()):
        raise GeometryError("line is not in a conic-cover plane")
    labels = [spread_label(ctx.tower, v) for v in u.points()]
    if len(set(labels)) != ctx.q + 1 or any(k in (0, INF) for k in labels):
        raise GeometryError("line meets a carrier or fewer than q+1 splash planes")
    R = subline_to_regulus(ctx, labels)
    if u not in set(R.ruling_lines()):
        raise GeometryError("line is not a ruling line of its regulus")
    return R


# -- special conics ------------------------------------------------------------

def extended_section(R: Regulus, pi: Subspace, E) -> list[Vector]:
    """pi* meet R*(t) for all t in GF(q^3) u {inf}, one point per plane.

    With f_j the forms of pi, the point sum lam_i (a_i + t b_i) lies in pi iff
    lam is in the kernel of the 3x3 matrix f_j(a_i) + t f_j(b_i).
    """
    forms = pi.annihilator
    A = [[E.dot(f, a) for a in R.a] for f in forms]
    Bm = [[E.dot(f, b) for b in R.b] for f in forms]
    out = []
    for t in list(E.elements()) + [INF]:
        if t == INF:
            M, vecs = Bm, R.b
        else:
            M = [[E.add[x][E.mul[t][y]] for x, y in zip(ra, rb)] for ra, rb in zip(A, Bm)]
            vecs = [combine((1, t), (a, b), E) for a, b in zip(R.a, R.b)]
        ker = nullspace(M, E, 3)
        if len(ker) != 1:
            raise GeometryError(f"extended plane meets the cover plane in dimension {len(ker) - 1}")
        out.append(Subspace.span(E, 5, [combine(ker[0], vecs, E)]).basis[0])
    return out


def is_cover_special_conic(ctx: BBContext, R: Regulus, pi: Subspace, lines: Sequence[Subspace]) -> bool:
    E = ctx.E
    sec = extended_section(R, pi, E)
    if len(set(sec)) != ctx.q ** 3 + 1:
        raise GeometryError("extended section has the wrong size")
    pts = set(sec)
    pis = pi.extend(E)
    for L in lines:
        X = L.meet(pis)
        if X.dim != 0 or X.basis[0] not in pts:
            return False
    return True
