import itertools

import pytest
from hypothesis import given, settings, strategies as st

from splashgeom.gf import FieldTower
from splashgeom.pg import (INF, GeometryError, Homography, Subspace, all_points,
                           is_regular_spread, line_plane_point, mat_inverse, mat_mul,
                           regulus_from_three_planes, regulus_triples, span)

F3 = FieldTower(3).base
F4 = FieldTower(4).base


def vectors(F, n):
    return st.tuples(*[st.integers(0, F.order - 1) for _ in range(n)])


def test_point_counts():
    assert len(all_points(F3, 2)) == 13
    assert len(all_points(F4, 3)) == 85
    assert Subspace.whole(F3, 5).num_points() == 364


def test_points_are_normalised_and_sorted():
    pts = all_points(F3, 2)
    assert pts == sorted(pts)
    for p in pts:
        assert next(x for x in p if x) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(vectors(F3, 6), min_size=1, max_size=4), st.lists(vectors(F3, 6), min_size=1, max_size=4))
def test_dimension_formula(rows1, rows2):
    S1 = Subspace.span(F3, 5, rows1)
    S2 = Subspace.span(F3, 5, rows2)
    M = S1.meet(S2)
    assert S1.dim + S2.dim == S1.join(S2).dim + M.dim
    assert S1.contains_subspace(M) and S2.contains_subspace(M)


@settings(max_examples=100, deadline=None)
@given(st.lists(vectors(F4, 5), min_size=1, max_size=4))
def test_span_is_canonical(rows):
    S = Subspace.span(F4, 4, rows)
    assert Subspace.span(F4, 4, list(reversed(rows))) == S
    assert Subspace.span(F4, 4, S.points()) == S
    assert len(S.points()) == S.num_points()
    for v in S.points():
        assert S.contains(v)


def test_from_equations():
    S = Subspace.from_equations(F3, 3, [(1, 0, 0, 0), (0, 1, 0, 0)])
    assert S.dim == 1
    assert S.points() == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1), (0, 0, 1, 2)]


def test_span_helper_needs_field():
    with pytest.raises(GeometryError):
        span([])
    assert span([], F3, 2).dim == -1


def test_line_plane_point():
    plane = Subspace.from_equations(F3, 3, [(0, 0, 0, 1)])
    line = Subspace.span(F3, 3, [(1, 0, 0, 1), (0, 1, 0, 1)])
    assert line_plane_point(line, plane) == (1, 2, 0, 0)
    inside = Subspace.span(F3, 3, [(1, 0, 0, 0), (0, 1, 0, 0)])
    with pytest.raises(GeometryError):
        line_plane_point(inside, plane)


def test_matrix_inverse():
    M = ((1, 2, 0), (0, 1, 1), (1, 0, 2))
    Mi = mat_inverse(M, F3)
    assert mat_mul(M, Mi, F3) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    with pytest.raises(GeometryError):
        mat_inverse(((1, 1), (1, 1)), F3)


def test_homography():
    H = Homography.of(F3, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    assert H.power(3).is_identity()
    assert H((1, 0, 0)) == (0, 0, 1)
    L = Subspace.span(F3, 2, [(1, 0, 0), (0, 1, 0)])
    assert H(L) == Subspace.span(F3, 2, [(0, 0, 1), (1, 0, 0)])
    with pytest.raises(GeometryError):
        Homography.of(F3, ((1, 1), (1, 1)))


def _coordinate_planes(F):
    e = [tuple(int(i == j) for j in range(6)) for i in range(6)]
    p1 = Subspace.span(F, 5, e[:3])
    p2 = Subspace.span(F, 5, e[3:])
    p3 = Subspace.span(F, 5, [tuple(a + b for a, b in zip(e[i], e[i + 3])) for i in range(3)])
    return p1, p2, p3


@pytest.mark.parametrize("F", [F3, F4], ids=["q3", "q4"])
def test_regulus_from_three_planes(F):
    p1, p2, p3 = _coordinate_planes(F)
    R = regulus_from_three_planes(p1, p2, p3)
    assert len(R.planes) == F.order + 1
    assert R.plane(0) == p1 and R.plane(INF) == p2 and R.plane(1) == p3
    # planes pairwise disjoint, every ruling line meets every plane in a point
    for A, B in itertools.combinations(R.planes, 2):
        assert A.meet(B).dim == -1
    lines = R.ruling_lines()
    assert len(set(lines)) == F.order ** 2 + F.order + 1
    for L in lines:
        for P in R.planes:
            assert L.meet(P).dim == 0


def test_regulus_rejects_meeting_planes():
    p1, p2, _ = _coordinate_planes(F3)
    with pytest.raises(GeometryError):
        regulus_from_three_planes(p1, p2, p1)


def test_regulus_triples():
    assert len(regulus_triples(28, 3)) == 3276
    big = regulus_triples(65, 4, seed=1)
    assert len(big) == 63 + 100 == len(set(big))
    assert big == regulus_triples(65, 4, seed=1)


def test_regularity_rejects_non_spreads():
    p1, p2, p3 = _coordinate_planes(F3)
    with pytest.raises(GeometryError):
        is_regular_spread([p1, p2, p3])
