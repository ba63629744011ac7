import itertools
import logging

import pytest

from splashgeom import covers as cv
from splashgeom import subplane as sp
from splashgeom.bruckbose import BBContext, lift, spread_plane
from splashgeom.gf import FieldTower
from splashgeom.pg import INF, GeometryError, Subspace, line_meets

log = logging.getLogger(__name__)


class Setup:
    def __init__(self, q):
        self.ctx = BBContext(FieldTower(q))
        self.B = sp.build_subplane(self.ctx)
        self.S = sp.splash_of(self.B)
        self.T, self.C = cv.covers_of_splash(self.ctx, self.S)


SETUP = {q: Setup(q) for q in (2, 3, 4, 5)}


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_cover_axioms(q):
    s = SETUP[q]
    n = q * q + q + 1
    r = cv.check_cover_axioms([s.S.planes, s.T.planes, s.C.planes])
    assert r["pass"]
    assert r["point_sets"] == [n * n] * 3


@pytest.mark.parametrize("q", [2, 3])
def test_beta_has_order_three(q):
    ctx = SETUP[q].ctx
    b = cv.beta(ctx)
    assert b.power(3).is_identity()
    for k in ctx.labels:
        assert b(ctx.spread[k]) == spread_plane(ctx.tower, k, 1)


def test_carriers_shared_across_families():
    ctx = SETUP[3].ctx
    for k in (0, INF):
        assert spread_plane(ctx.tower, k, 1) == spread_plane(ctx.tower, k, 2) == ctx.spread[k]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_theta(q):
    s = SETUP[q]
    ctx = s.ctx
    E, T = ctx.E, ctx.tower
    th = cv.theta(ctx)
    ths = cv.theta_sigma(ctx)
    for P in ctx.spread.values():
        assert ths(P) == P
        assert th(lift(P)) == lift(P)
    cm = E.div(T.tau, T.frob(T.tau, 1))
    tm = E.div(T.tau, T.frob(T.tau, 2))
    for k in s.S.labels:
        assert ths(s.C.planes[k]) == s.C.planes[E.mul[cm][k]]
        assert ths(s.T.planes[k]) == s.T.planes[E.mul[tm][k]]
    orbit = {s.T.planes[1]}
    P = s.T.planes[1]
    for _ in range(q * q + q):
        P = ths(P)
        orbit.add(P)
    assert len(orbit) == q * q + q + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_marked_points(q):
    s = SETUP[q]
    for cov in (cv.splash_cover(s.S), s.T, s.C):
        assert cv.marked_points_ok(s.ctx, cov) == []
        lines = cv.cover_lines(s.ctx, cov.kind)
        for k in cov.labels:
            assert lines[0].contains(cv.marked_point(s.ctx, cov.kind, k))


def test_q2_conic_marked_point():
    s = SETUP[2]
    ctx = s.ctx
    E = ctx.E
    tau = ctx.tower.tau
    assert cv.marked_coefficient(ctx, cv.Kind.CONIC) == tau
    X = tuple(E.add[a][E.mul[tau][b]] for a, b in zip(ctx.A1, ctx.conj(ctx.A2, 1)))
    assert s.C.planes[1].extend(E).contains(X)


@pytest.mark.parametrize("q", [2, 3])
def test_transversal_search_on_covers(q):
    s = SETUP[q]
    for cov in (s.T, s.C):
        found = cv.search_transversals(s.ctx, cov)
        assert len(found) == 3
        assert set(found) == set(cov.transversals)


@pytest.mark.parametrize("q", [2, 3])
def test_nine_transversals_are_conjugate_triples(q):
    ctx = SETUP[q].ctx
    nine = cv.nine_transversals(ctx)
    assert len({L for _, _, L in nine}) == 9
    for kind in cv.Kind:
        g0, g1, g2 = cv.cover_lines(ctx, kind)
        conj = Subspace.span(ctx.E, 5, [ctx.conj(v) for v in g0.basis])
        assert conj == g1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_carrier_characterisation(q):
    ctx = SETUP[q].ctx
    assert cv.carrier_characterisation(ctx) == [0, INF]


def test_non_carrier_splash_plane_misses_g_T():
    s = SETUP[3]
    gT = s.T.transversals[0]
    for k in s.S.labels:
        assert line_meets(gT, s.S.planes[k].extend(s.ctx.E)) is False


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_disjoint_splashes(q):
    ctx = SETUP[q].ctx
    r = cv.disjoint_splash_report(ctx)
    assert r["pass"]
    assert r["splashes"] == q - 1
    assert r["labels"] == q ** 3 + 1


def test_replacement_q3():
    ctx = SETUP[3].ctx
    for ch in itertools.product((cv.KEEP, cv.TANGENT, cv.CONIC), repeat=2):
        r = cv.replace_hyperreguli(ctx, ch)
        assert r.partition
        assert r.regular == (len(set(ch)) == 1), ch


def test_replacement_needs_one_selector_per_splash():
    with pytest.raises(GeometryError):
        cv.replace_hyperreguli(SETUP[3].ctx, [cv.KEEP])


@pytest.mark.parametrize("q", [3, 4])
def test_pencil_sections(q):
    s = SETUP[q]
    for i in range(len(s.B.points)):
        R = sp.pencil_regulus(s.B, i)
        for P in s.T.planes.values():
            assert cv.cover_plane_section(R, P).kind == "line"
        for P in s.C.planes.values():
            assert cv.cover_plane_section(R, P).kind == "conic"
        c = cv.classify_subline_regulus(R, s.T, s.C)
        assert c.value is cv.SublineClass.PENCIL and c.uniform
        assert len(c.line_planes) == q * q + q + 1


@pytest.mark.parametrize("q", [3, 4])
def test_enumerated_reguli_split_evenly(q):
    s = SETUP[q]
    regs = cv.enumerate_splash_reguli(s.ctx, s.S)
    classes = [cv.classify_subline_regulus(R, s.T, s.C) for R in regs]
    n = q * q + q + 1
    assert len(regs) == 2 * n
    assert all(c.uniform for c in classes)
    assert sum(c.value is cv.SublineClass.PENCIL for c in classes) == n


def test_q2_has_extra_reguli():
    # at q = 2 any three labels form an order-2-subline
    s = SETUP[2]
    assert len(cv.splash_sublines(s.ctx, s.S.labels)) == 35


@pytest.mark.parametrize("q", [2, 3])
def test_dual_conic_regulus_from_tangent_trace(q):
    s = SETUP[q]
    forms = sp.nine_quadrics(s.B)
    b = cv.beta(s.ctx)
    i = s.B.index_of((0, 0, 1))
    t1 = sp.tangent_trace(sp.tangent_plane(s.B, forms, i))
    assert s.T.planes[1].contains_subspace(t1)
    u = b(t1)
    assert s.C.planes[1].contains_subspace(u)
    R = cv.dual_conic_regulus(s.ctx, u, s.C)
    assert len(R.planes) == q + 1
    c = cv.classify_subline_regulus(R, s.T, s.C)
    assert c.value is cv.SublineClass.DUAL_CONIC and c.uniform
    # each ruling line lies in its own conic-cover plane
    homes = [[k for k, P in s.C.planes.items() if P.contains_subspace(L)] for L in R.ruling_lines()]
    assert all(len(h) == 1 for h in homes)
    assert len({h[0] for h in homes}) == len(homes)


def test_dual_conic_regulus_input_checks():
    s = SETUP[3]
    ctx = s.ctx
    # a line of a splash plane lies in no conic-cover plane
    u = Subspace.span(ctx.F, 5, ctx.spread[1].basis[:2])
    with pytest.raises(GeometryError):
        cv.dual_conic_regulus(ctx, u, s.C)
    P = s.C.planes[1]
    lines = {Subspace.span(ctx.F, 5, [a, b]) for a, b in itertools.combinations(P.points(), 2)}
    ok = rejected = 0
    for L in sorted(lines, key=lambda L: L.basis):
        try:
            R = cv.dual_conic_regulus(ctx, L, s.C)
        except GeometryError:
            rejected += 1
            continue
        ok += 1
        assert cv.classify_subline_regulus(R, s.T, s.C).value is cv.SublineClass.DUAL_CONIC
    log.info("lines of [C_1]: %d give reguli, %d rejected", ok, rejected)
    assert ok + rejected == 13
    assert ok > 0


@pytest.mark.parametrize("q", [2, 3])
def test_special_conics(q):
    s = SETUP[q]
    ctx = s.ctx
    wrong = 0
    for i in range(len(s.B.points)):
        R = sp.pencil_regulus(s.B, i)
        for k, P in s.C.planes.items():
            assert cv.is_cover_special_conic(ctx, R, P, s.C.transversals)
            if cv.is_cover_special_conic(ctx, R, P, s.T.transversals):
                wrong += 1
            else:
                log.info("pencil %d, conic plane %s: not special for the tangent transversals", i, k)
    log.info("wrong-cover special sections: %d", wrong)


def test_extended_section_size():
    s = SETUP[3]
    R = sp.pencil_regulus(s.B, 0)
    sec = cv.extended_section(R, s.C.planes[1], s.ctx.E)
    assert len(set(sec)) == 28
