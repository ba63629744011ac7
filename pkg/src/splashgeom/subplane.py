"""The coordinatised exterior order-q-subplane B of PG(2,q^3), its splash,
the nine quadrics cutting out [B] and tangent planes.

B is the image of PG(2,q) under K; its lines are the images of the lines of
PG(2,q) under K' (row vectors times K').  K' K is a scalar matrix.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .bruckbose import (BBContext, TwistedCubicParam, epsilon, sigma_section,
                        subline_to_regulus, twisted_cubic_from_subline, vec_label)
from .gf import FieldTower
from .pg import INF, GeometryError, Regulus, Subspace, Vector, mat_mul, mat_vec, normalize

log = logging.getLogger(__name__)


def k_matrices(tower: FieldTower):
    """(K, K') over GF(q^3) as row tuples."""
    E = tower.ext
    t = tower.tau
    tq = tower.frob(t, 1)
    t2 = E.mul[t][t]
    t2q = tower.frob(t2, 1)
    neg, mul, add, sub = E.neg, E.mul, E.add, E.sub
    K = ((neg[t], 1, 0),
         (neg[tq], 1, 0),
         (mul[t][tq], neg[add[t][tq]], 1))
    Kp = ((neg[1], 1, 0),
          (neg[tq], t, 0),
          (neg[t2q], t2, sub[t][tq]))
    return K, Kp


def _line_point(line: Sequence[int], E) -> Vector:
    """ell meet z = 0 for a line [a, b, c] of PG(2, E)."""
    a, b, _ = line
    return normalize((b, E.neg[a], 0), E)


@dataclass(frozen=True)
class SubplaneConfig:
    ctx: BBContext
    K: tuple
    K_inv: tuple
    base_points: tuple[Vector, ...]   # PG(2,q), same order as points
    points: tuple[Vector, ...]        # PG(2,q^3)
    base_lines: tuple[Vector, ...]
    lines: tuple[Vector, ...]

    @property
    def tower(self) -> FieldTower:
        return self.ctx.tower

    @cached_property
    def bb_points(self) -> tuple[Vector, ...]:
        """epsilon of the points, i.e. [B] in PG(6,q)."""
        return tuple(epsilon(self.tower, P) for P in self.points)

    def lines_through(self, i: int) -> list[int]:
        """Indices of the lines through points[i]."""
        F = self.tower.base
        P = self.base_points[i]
        return [j for j, l in enumerate(self.base_lines) if F.dot(l, P) == 0]

    def points_on(self, j: int) -> list[int]:
        F = self.tower.base
        l = self.base_lines[j]
        return [i for i, P in enumerate(self.base_points) if F.dot(l, P) == 0]

    def index_of(self, P: Sequence[int]) -> int:
        return self.points.index(normalize(P, self.tower.ext))


def build_subplane(ctx: BBContext) -> SubplaneConfig:
    tower = ctx.tower
    F, E = tower.base, tower.ext
    K, Kp = k_matrices(tower)
    KpK = mat_mul(Kp, K, E)
    c = KpK[0][0]
    if c == 0 or KpK != tuple(tuple(c if i == j else 0 for j in range(3)) for i in range(3)):
        raise GeometryError("K' K is not a scalar matrix")
    base_pts = tuple(Subspace.whole(F, 2).points())
    pts = tuple(normalize(mat_vec(K, P, E), E) for P in base_pts)
    # the lines of PG(2,q) have the same coordinates as its points
    lines = tuple(normalize(mat_vec(tuple(zip(*Kp)), l, E), E) for l in base_pts)
    if len(set(pts)) != len(pts):
        raise GeometryError("K is not injective on PG(2,q)")
    if any(P[2] == 0 for P in pts):
        raise GeometryError("subplane meets l_inf")
    for l, L in zip(base_pts, lines):
        for P, X in zip(base_pts, pts):
            if (F.dot(l, P) == 0) != (E.dot(L, X) == 0):
                raise GeometryError("incidence not preserved")
    if len({_line_point(L, E) for L in lines}) != len(lines):
        raise GeometryError("two lines of B meet l_inf in the same point")
    return SubplaneConfig(ctx, K, Kp, base_pts, pts, base_pts, lines)


@dataclass(frozen=True)
class Splash:
    labels: tuple            # sorted codes
    planes: dict = field(compare=False)
    carriers: tuple = (INF, 0)

    def __len__(self):
        return len(self.labels)


def splash_points(B: SubplaneConfig) -> list:
    """Labels k of the points (k, 1, 0) of l_inf on the extended lines of B."""
    E = B.tower.ext
    return [vec_label(_line_point(L, E)[:2], E) for L in B.lines]


def splash_of(B: SubplaneConfig) -> Splash:
    tower = B.tower
    computed = sorted(splash_points(B), key=lambda k: (k == INF, 0 if k == INF else k))
    expected = list(tower.splash_labels)
    if computed != expected:
        raise GeometryError(f"splash {computed} differs from the closed form {expected}")
    return make_splash(B.ctx, expected)


def make_splash(ctx: BBContext, labels: Sequence[int]) -> Splash:
    labels = tuple(sorted(labels))
    return Splash(labels, {k: ctx.spread[k] for k in labels})


def coset_labels(tower: FieldTower, j: int) -> tuple[int, ...]:
    E = tower.ext
    s = tower.tau_pow(j)
    return tuple(sorted(E.mul[s][k] for k in tower.splash_labels))


# -- quadrics ---------------------------------------------------------------

NVARS = 7
PAIRS = tuple((i, j) for i in range(NVARS) for j in range(i, NVARS))


@dataclass(frozen=True)
class QuadricForm:
    """Q(x) = sum over i <= j of coeffs[(i,j)] x_i x_j, coefficients listed in PAIRS order."""

    field: object
    coeffs: tuple[int, ...]

    def matrix(self):
        """Upper-triangular coefficient matrix."""
        C = [[0] * NVARS for _ in range(NVARS)]
        for (i, j), c in zip(PAIRS, self.coeffs):
            C[i][j] = c
        return C

    def __call__(self, x: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for (i, j), c in zip(PAIRS, self.coeffs):
            if c and x[i] and x[j]:
                acc = F.add[acc][F.mul[c][F.mul[x[i]][x[j]]]]
        return acc

    def polar_form(self, P: Sequence[int]) -> Vector:
        """The linear form X -> b(P, X) = Q(P+X) - Q(P) - Q(X)."""
        F = self.field
        out = [0] * NVARS
        for (i, j), c in zip(PAIRS, self.coeffs):
            if not c:
                continue
            if i == j:
                out[i] = F.add[out[i]][F.mul[F.add[c][c]][P[i]]]
            else:
                out[j] = F.add[out[j]][F.mul[c][P[i]]]
                out[i] = F.add[out[i]][F.mul[c][P[j]]]
        return tuple(out)

    def polar(self, x, y) -> int:
        return self.field.dot(self.polar_form(x), y)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> "QuadricForm":
        return QuadricForm(self.field, normalize(self.coeffs, self.field))

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        add, mul, _ = self.field.np_tables
        acc = np.zeros(len(X), dtype=np.int64)
        for (i, j), c in zip(PAIRS, self.coeffs):
            if c:
                acc = add[acc, mul[c, mul[X[:, i], X[:, j]]]]
        return acc


def _linear_forms(B: SubplaneConfig):
    """(X, Y, Z) = K'(x, y, z) as coefficient vectors over GF(q^3) in the 7 variables."""
    tower = B.tower
    E = tower.ext
    taus = [tower.tau_pow(c) for c in range(3)]
    out = []
    for row in B.K_inv:
        out.append(tuple([E.mul[row[0]][t] for t in taus] + [E.mul[row[1]][t] for t in taus] + [row[2]]))
    return out


def _cross_quadrics(tower: FieldTower, U, V) -> list[QuadricForm]:
    """The three tau-components of U^q V - U V^q."""
    E = tower.ext
    Uq = [tower.frob(c, 1) for c in U]
    Vq = [tower.frob(c, 1) for c in V]
    M = [[E.sub[E.mul[Uq[i]][V[j]]][E.mul[U[i]][Vq[j]]] for j in range(NVARS)] for i in range(NVARS)]
    comps = [[], [], []]
    for i, j in PAIRS:
        c = M[i][i] if i == j else E.add[M[i][j]][M[j][i]]
        for r, x in enumerate(tower.coords(c)):
            comps[r].append(x)
    return [QuadricForm(tower.base, tuple(c)) for c in comps]


def _proportional(a: QuadricForm, b: QuadricForm) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a.normalized() == b.normalized()


def nine_quadrics(B: SubplaneConfig, report: dict | None = None) -> list[QuadricForm]:
    """Quadrics from Y/X, Z/X and Z/Y lying in GF(q), denominators cleared."""
    X, Y, Z = _linear_forms(B)
    tower = B.tower
    forms = []
    for U, V in ((Y, X), (Z, X), (Z, Y)):
        forms.extend(_cross_quadrics(tower, U, V))
    # X/Y gives the same triple up to scalars
    dup = _cross_quadrics(tower, X, Y)
    same = all(_proportional(a, b) for a, b in zip(dup, forms[:3]))
    if report is not None:
        report["duplicate_triple_matches"] = same
    if not same:
        raise GeometryError("the X/Y and Y/X triples differ")
    if any(f.is_zero() for f in forms):
        raise GeometryError("a quadric vanished identically")
    if len({f.normalized() for f in forms}) != 9:
        raise GeometryError("the nine quadrics are not distinct")
    return forms


def affine_points_array(q: int) -> np.ndarray:
    """All q^6 affine points (x0..y2, z=1) of PG(6,q), in lexicographic order."""
    grid = np.array(list(itertools.product(range(q), repeat=6)), dtype=np.int64)
    return np.hstack([grid, np.ones((len(grid), 1), dtype=np.int64)])


def quadric_zeros(forms: Sequence[QuadricForm], X: np.ndarray) -> np.ndarray:
    mask = np.ones(len(X), dtype=bool)
    for f in forms:
        mask &= f.evaluate_many(X) == 0
    return mask


def scan_affine(B: SubplaneConfig, forms: Sequence[QuadricForm]) -> dict:
    """Common affine zeros of the forms compared with [B]."""
    q = B.tower.q
    X = affine_points_array(q)
    mask = quadric_zeros(forms, X)
    zeros = {tuple(int(v) for v in row) for row in X[mask]}
    F = B.tower.base
    target = {tuple(F.mul[F.inv[v[6]]][x] for x in v) for v in B.bb_points}
    return {
        "scanned": len(X),
        "zeros": len(zeros),
        "subplane_points": len(target),
        "extra": sorted(zeros - target),
        "missing": sorted(target - zeros),
    }


def count_zeros_at_infinity(forms: Sequence[QuadricForm], F) -> int:
    pts = np.array([v + (0,) for v in Subspace.whole(F, 5).points()], dtype=np.int64)
    return int(quadric_zeros(forms, pts).sum())


# -- tangent planes ---------------------------------------------------------

def tangent_plane(B: SubplaneConfig, forms: Sequence[QuadricForm], i: int) -> Subspace:
    """Common zeros of the polars at the i-th point of [B]."""
    F = B.tower.base
    P = B.bb_points[i]
    polars = []
    for n, f in enumerate(forms):
        L = f.polar_form(P)
        if not any(L):
            log.info("polar of quadric %d vanishes at %s", n, P)
            continue
        polars.append(L)
    T = Subspace.from_equations(F, 6, polars)
    if T.dim != 2 or not T.contains(P):
        raise GeometryError(f"polar intersection at {P} has dimension {T.dim}")
    return T


def cubic_through(B: SubplaneConfig, i: int, j: int) -> TwistedCubicParam:
    """Twisted cubic of the j-th line of B parametrised so that t = 0 is point i."""
    E = B.tower.ext
    others = [r for r in B.points_on(j) if r != i]
    if len(others) == len(B.points_on(j)):
        raise GeometryError("point is not on the line")
    A = mat_vec(B.K, B.base_points[i], E)
    Bv = mat_vec(B.K, B.base_points[others[0]], E)
    return twisted_cubic_from_subline(B.ctx, A, Bv)


def tangent_lines_via_cubics(B: SubplaneConfig, i: int) -> list[Subspace]:
    out = []
    P = B.bb_points[i]
    for j in B.lines_through(i):
        N = cubic_through(B, i, j)
        if N.point(0) != P:
            raise GeometryError("cubic does not pass through the point at t = 0")
        out.append(N.tangent_line(0))
    return out


def tangent_plane_via_cubics(B: SubplaneConfig, i: int) -> Subspace:
    lines = tangent_lines_via_cubics(B, i)
    T = Subspace.span(B.tower.base, 6, [v for L in lines for v in L.basis])
    if T.dim != 2:
        raise GeometryError(f"the {len(lines)} tangent lines span dimension {T.dim}")
    return T


def tangent_trace(T: Subspace) -> Subspace:
    L = sigma_section(T)
    if L.dim != 1:
        raise GeometryError("tangent plane does not meet Sigma_inf in a line")
    return L


def cover_label_of(trace: Subspace, cover_planes: dict):
    """Label of the unique cover plane containing the line, else None."""
    hits = [k for k, P in cover_planes.items() if P.contains_subspace(trace)]
    if len(hits) > 1:
        raise GeometryError("line lies in two cover planes")
    return hits[0] if hits else None


def pencil_labels(B: SubplaneConfig, i: int) -> list:
    E = B.tower.ext
    return [vec_label(_line_point(B.lines[j], E)[:2], E) for j in B.lines_through(i)]


def pencil_regulus(B: SubplaneConfig, i: int) -> Regulus:
    return subline_to_regulus(B.ctx, pencil_labels(B, i))
