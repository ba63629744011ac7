"""Bruck-Bose model of PG(2,q^3) in PG(6,q).

Objects in the hyperplane at infinity z = 0 (spread planes, covers,
transversal lines) are stored in PG(5,q) coordinates (x0,x1,x2,y0,y1,y2);
affine objects live in PG(6,q) with the extra coordinate z.  Extension to
GF(q^3) never changes coordinates, only the field attached to a subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf import FieldTower
from .pg import (INF, GeometryError, Regulus, Subspace, Vector, normalize,
                 rank, regulus_from_three_planes)


def spread_plane(tower: FieldTower, k, twist: int = 0) -> Subspace:
    """{([k x], [x^(q^twist)]) : x != 0}; twist 0, 1, 2 gives S_k, T_k, C_k."""
    E = tower.ext
    rows = []
    for c in range(3):
        x = tower.tau_pow(c)
        if k == INF:
            rows.append(tower.coords(x) + (0, 0, 0))
        else:
            rows.append(tower.coords(E.mul[k][x]) + tower.coords(tower.frob(x, twist)))
    return Subspace.span(tower.base, 5, rows)


def spread_label(tower: FieldTower, v: Sequence[int]):
    """Label k of the spread plane [S_k] through a point of PG(5,q)."""
    alpha, beta = tower.elem(v[0:3]), tower.elem(v[3:6])
    if beta == 0:
        return INF
    return tower.ext.div(alpha, beta)


def epsilon(tower: FieldTower, P: Sequence[int]) -> Vector:
    """Bruck-Bose image ([alpha], [beta], z) of (alpha, beta, z) in PG(2,q^3).

    A last coordinate outside GF(q) is first made equal to its norm by
    scaling with z^(q^2+q).
    """
    E = tower.ext
    a, b, z = P
    if not (a or b or z):
        raise GeometryError("zero vector")
    if z and not tower.in_base(z):
        s = E.mul[tower.frob(z, 1)][tower.frob(z, 2)]
        a, b, z = E.mul[a][s], E.mul[b][s], E.mul[z][s]
        assert tower.in_base(z)
    return normalize(tower.coords(a) + tower.coords(b) + (z,), tower.base)


def to_sigma(v: Sequence[int]) -> Vector:
    """PG(6) point with z = 0 -> PG(5) coordinates."""
    assert v[6] == 0
    return tuple(v[:6])


def from_sigma(v: Sequence[int]) -> Vector:
    return tuple(v) + (0,)


def sigma_section(S: Subspace) -> Subspace:
    """S meet Sigma_inf, in PG(5) coordinates."""
    sigma = Subspace.from_equations(S.field, 6, [(0,) * 6 + (1,)])
    return Subspace.span(S.field, 5, [to_sigma(v) for v in S.meet(sigma).basis])


def lift(S: Subspace) -> Subspace:
    """A subspace of Sigma_inf (PG(5) coordinates) as a subspace of PG(6)."""
    return Subspace.span(S.field, 6, [from_sigma(v) for v in S.basis])


class BBContext:
    """The regular 2-spread of Sigma_inf with labelled planes and transversals."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.F = tower.base
        self.E = tower.ext
        self.q = tower.q
        self.labels = tuple(range(tower.Q)) + (INF,)
        self.frame = tower.frame
        A = self.frame.A
        self.A1: Vector = A + (0, 0, 0)
        self.A2: Vector = (0, 0, 0) + A
        self.sigma_inf = Subspace.from_equations(self.F, 6, [(0,) * 6 + (1,)])

    @cached_property
    def spread(self) -> dict:
        return {k: spread_plane(self.tower, k) for k in self.labels}

    def plane(self, k, twist: int = 0) -> Subspace:
        if twist == 0:
            return self.spread[k]
        return spread_plane(self.tower, k, twist)

    def label_of(self, v: Sequence[int]):
        return spread_label(self.tower, v)

    def conj(self, v: Sequence[int], i: int = 1) -> Vector:
        return self.tower.conj_vec(v, i)

    @cached_property
    def g_S(self) -> Subspace:
        return Subspace.span(self.E, 5, [self.A1, self.A2])


def spread_transversals(ctx: BBContext) -> tuple[Subspace, Subspace, Subspace]:
    """g_S = <A1, A2> and its two Frobenius conjugates, in PG(5,q^3)."""
    return tuple(Subspace.span(ctx.E, 5, [ctx.conj(ctx.A1, i), ctx.conj(ctx.A2, i)])
                 for i in range(3))


def _classes(points: np.ndarray, forms: Sequence[Vector], F) -> np.ndarray:
    """Code of the projective point (f_1(X), f_2(X), f_3(X)) for each row X."""
    add, mul, inv = F.np_tables
    vals = []
    for f in forms:
        acc = np.zeros(len(points), dtype=np.int64)
        for j, c in enumerate(f):
            if c:
                acc = add[acc, mul[c, points[:, j]]]
        vals.append(acc)
    V = np.stack(vals, axis=1)
    nz = V != 0
    if not nz.any(axis=1).all():
        raise GeometryError("transversal search needs pairwise disjoint planes")
    lead = V[np.arange(len(V)), nz.argmax(axis=1)]
    W = mul[inv[lead][:, None], V]
    Q = F.order
    return sum(W[:, i] * Q ** i for i in range(W.shape[1]))


def transversal_search(planes: Sequence[Subspace]) -> list[Subspace]:
    """Every line meeting all the given pairwise disjoint planes.

    Candidates are the lines <P1, P2> for all pairs P1 in planes[0],
    P2 in planes[1]; a candidate meets another plane iff the images of P1
    and P2 under that plane's three defining forms are proportional.
    """
    if len(planes) < 2:
        raise GeometryError("need at least two planes")
    F = planes[0].field
    pts1 = planes[0].points()
    pts2 = planes[1].points()
    X1 = np.array(pts1, dtype=np.int64)
    X2 = np.array(pts2, dtype=np.int64)
    rest = planes[2:]
    if not rest:
        ii, jj = np.meshgrid(np.arange(len(pts1)), np.arange(len(pts2)), indexing="ij")
        ii, jj = ii.ravel(), jj.ravel()
    else:
        k1 = _classes(X1, rest[0].annihilator, F)
        k2 = _classes(X2, rest[0].annihilator, F)
        ii, jj = np.nonzero(k1[:, None] == k2[None, :])
        for S in rest[1:]:
            if not len(ii):
                break
            c1 = _classes(X1[ii], S.annihilator, F)
            c2 = _classes(X2[jj], S.annihilator, F)
            keep = c1 == c2
            ii, jj = ii[keep], jj[keep]
    lines = [Subspace.span(F, 5, [pts1[i], pts2[j]]) for i, j in zip(ii.tolist(), jj.tolist())]
    return sorted(lines, key=lambda L: L.basis)


# -- order-q-sublines of PG(1,q^3) -----------------------------------------

def label_vec(k) -> tuple[int, int]:
    return (1, 0) if k == INF else (k, 1)


def vec_label(v: Sequence[int], E):
    x, y = v
    return INF if y == 0 else E.div(x, y)


def _det2(E, u, v):
    return E.sub[E.mul[u[0]][v[1]]][E.mul[u[1]][v[0]]]


def cross_ratio(E, a, b, c, d):
    """(a, b; c, d) of four points of PG(1, E) given as labels; INF if undefined."""
    a, b, c, d = (label_vec(x) for x in (a, b, c, d))
    num = E.mul[_det2(E, a, c)][_det2(E, b, d)]
    den = E.mul[_det2(E, a, d)][_det2(E, b, c)]
    if den == 0:
        return INF
    return E.div(num, den)


def label_key(k):
    return (1, 0) if k == INF else (0, k)


def subline_through(tower: FieldTower, k1, k2, k3) -> tuple:
    """The order-q-subline through three distinct points of PG(1,q^3)."""
    E = tower.ext
    v1, v2, v3 = label_vec(k1), label_vec(k2), label_vec(k3)
    d = _det2(E, v1, v2)
    if d == 0:
        raise GeometryError("points are not distinct")
    # lam v1 + mu v2 = v3
    lam = E.div(_det2(E, v3, v2), d)
    mu = E.div(_det2(E, v1, v3), d)
    u = (E.mul[lam][v1[0]], E.mul[lam][v1[1]])
    w = (E.mul[mu][v2[0]], E.mul[mu][v2[1]])
    pts = {vec_label(u, E)}
    for a in tower.base.elements():
        pts.add(vec_label((E.add[E.mul[a][u[0]]][w[0]], E.add[E.mul[a][u[1]]][w[1]]), E))
    return tuple(sorted(pts, key=label_key))


def is_subline(tower: FieldTower, labels: Sequence) -> bool:
    """q+1 distinct points whose cross-ratios with the first three lie in GF(q)."""
    labels = list(labels)
    if len(labels) != tower.q + 1 or len(set(labels)) != len(labels):
        return False
    a, b, c = labels[:3]
    for d in labels[3:]:
        cr = cross_ratio(tower.ext, a, b, c, d)
        if cr == INF or not tower.in_base(cr):
            return False
    return True


def subline_to_regulus(ctx: BBContext, labels: Sequence) -> Regulus:
    """The 2-regulus {[S_k] : k in labels} of an order-q-subline of l_inf."""
    labels = list(labels)
    if not is_subline(ctx.tower, labels):
        raise GeometryError(f"labels {labels} are not an order-q-subline")
    planes = [ctx.spread[k] for k in labels]
    R = regulus_from_three_planes(*planes[:3])
    R = Regulus(ctx.F, R.a, R.b, labels=tuple(sorted(labels, key=label_key)))
    # labels ride along; extension drops them
    if R.plane_set != frozenset(planes):
        raise GeometryError("spread planes of the subline do not form a 2-regulus")
    return R


def regulus_labels(ctx: BBContext, R: Regulus) -> tuple:
    """Spread labels of a regulus whose planes are spread planes."""
    out = []
    for P in R.planes:
        k = ctx.label_of(P.basis[0])
        if ctx.spread[k] != P:
            raise GeometryError("regulus plane is not a spread plane")
        out.append(k)
    return tuple(sorted(out, key=label_key))


def subline_of_plane_points(tower: FieldTower, points: Sequence[Sequence[int]]) -> bool:
    """Whether q+1 points of PG(2,q^3) form an order-q-subline."""
    E = tower.ext
    pts = [tuple(p) for p in points]
    red = Subspace.span(E, 2, pts)
    if red.dim != 1:
        return False
    u, v = red.basis
    labels = []
    for p in pts:
        # p = x u + y v ; the basis is in echelon form so read off pivots
        piv_u = next(i for i, c in enumerate(u) if c)
        piv_v = next(i for i, c in enumerate(v) if c)
        x, y = p[piv_u], p[piv_v]
        labels.append(vec_label((x, y), E))
    return is_subline(tower, labels)


# -- twisted cubics ---------------------------------------------------------

def _pmul(E, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = E.add[out[i + j]][E.mul[x][y]]
    return out


def poly_eval(F, coeffs: Sequence[int], t: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = F.add[F.mul[acc][t]][c]
    return acc


@dataclass(frozen=True)
class TwistedCubicParam:
    """Seven coordinate polynomials (low -> high, degree <= 3) over GF(q)."""

    tower: FieldTower
    coord_polys: tuple[tuple[int, ...], ...]
    plane_at_infinity_label: object

    def point(self, t, field=None) -> Vector:
        F = field or self.tower.base
        if t == INF:
            v = tuple(c[3] for c in self.coord_polys)
        else:
            v = tuple(poly_eval(F, c, t) for c in self.coord_polys)
        return normalize(v, F)

    def points(self) -> list[Vector]:
        return [self.point(t) for t in list(self.tower.base.elements()) + [INF]]

    def extension_points(self) -> list[Vector]:
        E = self.tower.ext
        return [self.point(t, E) for t in list(E.elements()) + [INF]]

    def tangent_line(self, t0: int) -> Subspace:
        """<c(t0), r(t0)> where c(t) - c(t0) = (t - t0) r(t), dividing again
        while r(t0) is proportional to c(t0)."""
        F = self.tower.base
        polys = [list(c) for c in self.coord_polys]
        c0 = tuple(poly_eval(F, c, t0) for c in polys)
        cur = polys
        while True:
            quot = []
            for c in cur:
                # synthetic division of c(t) - c(t0) by (t - t0)
                c = list(c)
                c[0] = F.sub[c[0]][poly_eval(F, c, t0)]
                qc = [0] * (len(c) - 1)
                acc = 0
                for i in range(len(c) - 1, 0, -1):
                    acc = F.add[F.mul[acc][t0]][c[i]]
                    qc[i - 1] = acc
                quot.append(qc)
            r0 = tuple(poly_eval(F, c, t0) for c in quot)
            if rank([c0, r0], F) == 2:
                return Subspace.span(F, 6, [c0, r0])
            if not any(any(c) for c in quot):
                raise GeometryError("curve is a single point")
            cur = quot


def twisted_cubic_from_subline(ctx: BBContext, A: Sequence[int], B: Sequence[int]) -> TwistedCubicParam:
    """Bruck-Bose image of the subline A + tB, t in GF(q) u {inf}, as polynomials in t.

    Each coordinate is a {1,tau,tau^2}-component of alpha(t) g1(t) g2(t),
    beta(t) g1(t) g2(t) or gamma(t) g1(t) g2(t), where g1, g2 apply Frobenius
    to the coefficients of gamma(t) only.
    """
    tower, E = ctx.tower, ctx.E
    if B[2] == 0 or any(E.add[A[2]][E.mul[t][B[2]]] == 0 for t in ctx.F.elements()):
        raise GeometryError("subline meets l_inf")
    alpha = [A[0], B[0]]
    beta = [A[1], B[1]]
    gamma = [A[2], B[2]]
    g1 = [tower.frob(c, 1) for c in gamma]
    g2 = [tower.frob(c, 2) for c in gamma]
    prod = _pmul(E, g1, g2)
    X, Y, Z = (_pmul(E, f, prod) for f in (alpha, beta, gamma))
    polys = []
    for P in (X, Y):
        comps = [tower.coords(c) for c in P]
        polys.extend(tuple(cc[i] for cc in comps) for i in range(3))
    if not all(tower.in_base(c) for c in Z):
        raise GeometryError("norm polynomial has coefficients outside GF(q)")
    polys.append(tuple(Z))
    # direction at infinity of the line AB
    d = tuple(E.sub[E.mul[B[2]][A[i]]][E.mul[A[2]][B[i]]] for i in range(2))
    label = vec_label(d, E)
    return TwistedCubicParam(tower, tuple(polys), label)


def _lift_line(L: Subspace) -> Subspace:
    return L if L.ambient == 6 else lift(L)


def is_special_cubic(N: TwistedCubicParam, transversals: Sequence[Subspace]) -> bool:
    """Whether the GF(q^3)-extension of N meets each of the given lines."""
    return not missed_transversals(N, transversals)


def missed_transversals(N: TwistedCubicParam, transversals: Sequence[Subspace]) -> list[int]:
    pts = N.extension_points()
    missed = []
    for i, L in enumerate(transversals):
        L = _lift_line(L).extend(N.tower.ext)
        if not any(L.contains(p) for p in pts):
            missed.append(i)
    return missed


def cubic_space(N: TwistedCubicParam) -> Subspace:
    return Subspace.span(N.tower.base, 6, N.points())
