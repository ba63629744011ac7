import pytest

from splashgeom import subplane as sp
from splashgeom.bruckbose import BBContext, vec_label
from splashgeom.gf import FieldTower
from splashgeom.pg import INF, GeometryError, Subspace, mat_mul

B = {q: sp.build_subplane(BBContext(FieldTower(q))) for q in (2, 3, 4, 5)}


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_k_matrices_are_inverse_up_to_scalar(q):
    b = B[q]
    E = b.tower.ext
    P = mat_mul(b.K_inv, b.K, E)
    c = P[0][0]
    assert c and P == ((c, 0, 0), (0, c, 0), (0, 0, c))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_incidence(q):
    b = B[q]
    n = q * q + q + 1
    assert len(b.points) == len(b.lines) == n
    assert all(P[2] for P in b.points)
    for i in range(n):
        assert len(b.lines_through(i)) == q + 1
        assert len(b.points_on(i)) == q + 1
    E = b.tower.ext
    for j, L in enumerate(b.lines):
        assert {i for i, P in enumerate(b.points) if E.dot(L, P) == 0} == set(b.points_on(j))


@pytest.mark.parametrize("q", [2, 3])
def test_line_formula(q):
    b = B[q]
    T = b.tower
    E = T.ext
    t = T.tau
    tq = T.frob(t)
    t2 = E.mul[t][t]
    for l, m, n in b.base_lines:
        a = E.neg[E.add[E.add[l][E.mul[tq][m]]][E.mul[T.frob(t2)][n]]]
        bb_ = E.add[E.add[l][E.mul[t][m]]][E.mul[t2][n]]
        c = E.mul[n][E.sub[t][tq]]
        assert sp.normalize((a, bb_, c), E) in b.lines


def test_origin_is_in_the_subplane():
    for b in B.values():
        assert (0, 0, 1) in b.points
        assert tuple(row[2] for row in b.K) == (0, 0, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_splash_closed_form(q):
    b = B[q]
    S = sp.splash_of(b)
    T = b.tower
    assert len(S) == q * q + q + 1
    assert set(S.labels) == {T.tau_pow((q - 1) * i) for i in range(q * q + q + 1)}
    assert S.carriers == (INF, 0)
    assert 0 not in S.labels and INF not in S.labels


def test_q2_splash_is_everything_but_carriers():
    assert set(sp.splash_of(B[2]).labels) == set(range(1, 8))


def test_cosets_partition_the_rest():
    T = B[4].tower
    seen = []
    for j in range(3):
        seen.extend(sp.coset_labels(T, j))
    assert sorted(seen) == list(range(1, 64))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_nine_quadrics_cut_out_the_subplane(q):
    b = B[q]
    rep = {}
    forms = sp.nine_quadrics(b, rep)
    assert len(forms) == 9 and rep["duplicate_triple_matches"]
    r = sp.scan_affine(b, forms)
    assert r["scanned"] == q ** 6
    assert r["zeros"] == r["subplane_points"] == q * q + q + 1
    assert not r["extra"] and not r["missing"]
    for P in b.bb_points:
        assert all(f(P) == 0 for f in forms)
    assert all(f((0, 0, 0, 0, 0, 0, 1)) == 0 for f in forms)


@pytest.mark.parametrize("q", [2, 3])
def test_polar_is_bilinear(q):
    b = B[q]
    F = b.tower.base
    pts = Subspace.whole(F, 6).points()[:40]
    for f in sp.nine_quadrics(b):
        for x in pts[:8]:
            for y in pts[::5]:
                s = tuple(F.add[u][v] for u, v in zip(x, y))
                assert f.polar(x, y) == F.sub[F.sub[f(s)][f(x)]][f(y)]


def test_tangent_plane_at_origin_q2():
    b = B[2]
    T = b.tower
    forms = sp.nine_quadrics(b)
    i = b.index_of((0, 0, 1))
    trace = sp.tangent_trace(sp.tangent_plane(b, forms, i))
    t = T.tau
    want = Subspace.span(T.base, 5, [T.coords(1) + T.coords(1), T.coords(t) + T.coords(T.frob(t))])
    assert trace == want


@pytest.mark.parametrize("q", [2, 3, 4])
def test_tangent_planes_agree_and_biject(q):
    from splashgeom.bruckbose import spread_plane
    b = B[q]
    S = sp.splash_of(b)
    cover = {k: spread_plane(b.tower, k, 1) for k in S.labels}
    forms = sp.nine_quadrics(b)
    labels = []
    for i, P in enumerate(b.bb_points):
        T1 = sp.tangent_plane(b, forms, i)
        T2 = sp.tangent_plane_via_cubics(b, i)
        assert T1 == T2 and T1.contains(P)
        trace = sp.tangent_trace(T1)
        labels.append(sp.cover_label_of(trace, cover))
        # the q+1 tangent lines meet Sigma_inf in the points of the trace
        hits = {sp.sigma_section(L).basis for L in sp.tangent_lines_via_cubics(b, i)}
        assert len(hits) == q + 1
        assert all(trace.contains(h[0]) for h in hits)
    assert None not in labels and len(set(labels)) == len(b.points)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_pencil_reguli(q):
    b = B[q]
    S = sp.splash_of(b)
    regs = [sp.pencil_regulus(b, i) for i in range(len(b.points))]
    assert len({R.labels for R in regs}) == q * q + q + 1
    for R in regs:
        assert len(R.planes) == q + 1
        assert set(R.labels) <= set(S.labels)
        assert all(P in set(S.planes.values()) for P in R.planes)


def test_point_not_on_line_has_no_cubic():
    b = B[3]
    j = next(j for j in range(len(b.lines)) if 0 not in b.points_on(j))
    with pytest.raises(GeometryError):
        sp.cubic_through(b, 0, j)


def test_splash_points_are_line_meets():
    b = B[3]
    E = b.tower.ext
    for L, k in zip(b.lines, sp.splash_points(b)):
        assert E.dot(L, (k, 1, 0)) == 0
        assert vec_label((k, 1), E) == k


def test_quadrics_miss_sigma_inf_count_is_reported():
    b = B[3]
    n = sp.count_zeros_at_infinity(sp.nine_quadrics(b), b.tower.base)
    assert n >= 0
