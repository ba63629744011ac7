"""Projective linear algebra over the int-coded fields of :mod:`splashgeom.gf`.

Points are tuples normalised so the leftmost nonzero coordinate is 1.
Subspaces are stored by their reduced row-echelon basis, so equality and
hashing are exact.  The parameter value infinity is ``math.inf``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .gf import Field

INF = math.inf

Vector = tuple[int, ...]


class GeometryError(ValueError):
    pass


# -- linear algebra -------------------------------------------------------

def rref(rows: Iterable[Sequence[int]], F: Field) -> tuple[list[Vector], list[int]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv[m[r][c]]
        if s != 1:
            ms = mul[s]
            m[r] = [ms[x] for x in m[r]]
        row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                mf = mul[neg[m[i][c]]]
                m[i] = [add[a][mf[b]] for a, b in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(x) for x in m[:r]], pivots


def rank(rows: Iterable[Sequence[int]], F: Field) -> int:
    return len(rref(rows, F)[0])


def nullspace(rows: Sequence[Sequence[int]], F: Field, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : row . x = 0 for every row}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows, F)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = F.neg[row[f]]
        basis.append(tuple(v))
    return basis


def normalize(v: Sequence[int], F: Field) -> Vector:
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            m = F.mul[F.inv[x]]
            return tuple(m[y] for y in v)
    raise GeometryError("the zero vector is not a projective point")


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], F: Field) -> Vector:
    add, mul = F.add, F.mul
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c:
            mc = mul[c]
            out = [add[a][mc[b]] for a, b in zip(out, v)]
    return tuple(out)


def mat_vec(M: Sequence[Sequence[int]], v: Sequence[int], F: Field) -> Vector:
    return tuple(F.dot(row, v) for row in M)


def mat_mul(A, B, F: Field):
    cols = list(zip(*B))
    return tuple(tuple(F.dot(row, c) for c in cols) for row in A)


def mat_inverse(M, F: Field):
    n = len(M)
    aug = [tuple(M[i]) + tuple(int(i == j) for j in range(n)) for i in range(n)]
    red, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise GeometryError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = []
    off = 0
    for b in blocks:
        for row in b:
            out.append(tuple([0] * off + list(row) + [0] * (n - off - len(row))))
        off += len(b)
    return tuple(out)


# -- subspaces ------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A projective subspace of PG(ambient, field) in canonical form."""

    field: Field
    ambient: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if len(v) != ambient + 1:
                raise GeometryError(f"vector {v} is not in PG({ambient},{field.order})")
        red, _ = rref(vectors, field)
        return cls(field, ambient, tuple(red))

    @classmethod
    def whole(cls, field: Field, ambient: int) -> "Subspace":
        n = ambient + 1
        return cls(field, ambient, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_equations(cls, field: Field, ambient: int, forms: Sequence[Sequence[int]]) -> "Subspace":
        if not forms:
            return cls.whole(field, ambient)
        return cls.span(field, ambient, nullspace(forms, field, ambient + 1))

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def __repr__(self):
        return f"Subspace(dim={self.dim}, PG({self.ambient},{self.field.order}), {list(self.basis)})"

    @cached_property
    def annihilator(self) -> tuple[Vector, ...]:
        """Linear forms whose common zeros are exactly this subspace."""
        if not self.basis:
            return tuple(tuple(int(i == j) for j in range(self.ambient + 1))
                         for i in range(self.ambient + 1))
        return tuple(nullspace(self.basis, self.field, self.ambient + 1))

    def contains(self, v: Sequence[int]) -> bool:
        dot = self.field.dot
        return all(dot(f, v) == 0 for f in self.annihilator)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def join(self, *others: "Subspace | Sequence[int]") -> "Subspace":
        rows = list(self.basis)
        for o in others:
            rows.extend(o.basis if isinstance(o, Subspace) else [tuple(o)])
        return Subspace.span(self.field, self.ambient, rows)

    def meet(self, other: "Subspace") -> "Subspace":
        forms = list(self.annihilator) + list(other.annihilator)
        if not self.basis or not other.basis:
            out = Subspace(self.field, self.ambient, ())
        else:
            out = Subspace.span(self.field, self.ambient, nullspace(forms, self.field, self.ambient + 1))
        assert self.dim + other.dim == self.join(other).dim + out.dim, "dimension formula violated"
        return out

    def extend(self, field: Field) -> "Subspace":
        """The same subspace read over an extension field (codes coincide)."""
        return Subspace(field, self.ambient, self.basis)

    def points(self) -> list[Vector]:
        return sorted(self.iter_points())

    def iter_points(self) -> Iterator[Vector]:
        F = self.field
        add, mul = F.add, F.mul
        rows = self.basis
        k = len(rows)
        scaled = [[tuple(mul[c][x] for x in row) for c in range(F.order)] for row in rows]
        for lead in range(k):
            base = rows[lead]
            for tail in itertools.product(range(F.order), repeat=k - lead - 1):
                v = base
                for j, c in enumerate(tail, start=lead + 1):
                    if c:
                        s = scaled[j][c]
                        v = tuple(add[a][b] for a, b in zip(v, s))
                yield v

    def num_points(self) -> int:
        Q = self.field.order
        return (Q ** len(self.basis) - 1) // (Q - 1)


def span(items: Sequence["Subspace | Sequence[int]"], field: Field | None = None,
         ambient: int | None = None) -> Subspace:
    """Smallest subspace containing the given points/subspaces.

    An empty ``items`` gives the empty subspace (dim -1); ``field`` and
    ``ambient`` are then required.
    """
    rows = []
    for it in items:
        if isinstance(it, Subspace):
            field, ambient = it.field, it.ambient
            rows.extend(it.basis)
        else:
            rows.append(tuple(it))
            if ambient is None:
                ambient = len(it) - 1
    if field is None or ambient is None:
        raise GeometryError("span of plain vectors needs a field")
    return Subspace.span(field, ambient, rows)


def meet(S1: Subspace, S2: Subspace) -> Subspace:
    return S1.meet(S2)


def enumerate_points(S: Subspace) -> list[Vector]:
    return S.points()


def all_points(field: Field, ambient: int) -> list[Vector]:
    return Subspace.whole(field, ambient).points()


def line_meets(line: Subspace, plane: Subspace) -> bool:
    return plane.join(line).dim < plane.dim + line.dim + 1


def line_plane_point(line: Subspace, plane: Subspace) -> Vector | None:
    """The single point of ``line`` on ``plane``; None if disjoint.

    Raises if the line lies in the plane.
    """
    F = plane.field
    u, v = line.basis
    fu = [F.dot(f, u) for f in plane.annihilator]
    fv = [F.dot(f, v) for f in plane.annihilator]
    if not any(fu):
        if not any(fv):
            raise GeometryError("line lies in the plane")
        return normalize(u, F)
    if not any(fv):
        return normalize(v, F)
    # lambda u + mu v in plane iff lambda fu + mu fv = 0
    i = next(i for i, x in enumerate(fu) if x)
    lam = fv[i]
    mu = F.neg[fu[i]]
    for a, b in zip(fu, fv):
        if F.add[F.mul[lam][a]][F.mul[mu][b]]:
            return None
    return normalize(combine((lam, mu), (u, v), F), F)


# -- homographies ---------------------------------------------------------

@dataclass(frozen=True)
class Homography:
    field: Field
    mat: tuple[Vector, ...]

    @classmethod
    def of(cls, field: Field, mat) -> "Homography":
        rows = [tuple(r) for r in mat]
        if rank(rows, field) != len(rows):
            raise GeometryError("homography matrix is singular")
        flat = [x for r in rows for x in r]
        lead = next(x for x in flat if x)
        m = field.mul[field.inv[lead]]
        return cls(field, tuple(tuple(m[x] for x in r) for r in rows))

    def __call__(self, obj):
        if isinstance(obj, Subspace):
            return Subspace.span(obj.field, obj.ambient, [mat_vec(self.mat, v, obj.field) for v in obj.basis])
        return normalize(mat_vec(self.mat, obj, self.field), self.field)

    def __matmul__(self, other: "Homography") -> "Homography":
        return Homography.of(self.field, mat_mul(self.mat, other.mat, self.field))

    def power(self, e: int) -> "Homography":
        n = len(self.mat)
        out = Homography.of(self.field, [[int(i == j) for j in range(n)] for i in range(n)])
        for _ in range(e):
            out = self @ out
        return out

    def is_identity(self) -> bool:
        n = len(self.mat)
        return self.mat == tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


# -- reguli ---------------------------------------------------------------

class Regulus:
    """A 2-regulus of PG(5,F): plane(t) = <a_i + t b_i>, t in F u {inf}.

    ``params`` defaults to all of F u {inf}; pass a subset to restrict.
    """

    def __init__(self, field: Field, a: Sequence[Vector], b: Sequence[Vector], params=None,
                 labels: tuple | None = None):
        self.field = field
        self.labels = labels
        self.a = tuple(tuple(v) for v in a)
        self.b = tuple(tuple(v) for v in b)
        if params is None:
            params = list(field.elements()) + [INF]
        self.params = tuple(params)

    def plane(self, t) -> Subspace:
        F = self.field
        if t == INF:
            return Subspace.span(F, 5, self.b)
        return Subspace.span(F, 5, [combine((1, t), (ai, bi), F) for ai, bi in zip(self.a, self.b)])

    @cached_property
    def planes(self) -> tuple[Subspace, ...]:
        return tuple(self.plane(t) for t in self.params)

    @cached_property
    def plane_set(self) -> frozenset[Subspace]:
        return frozenset(self.planes)

    def ruling_line(self, lam: Sequence[int]) -> Subspace:
        F = self.field
        return Subspace.span(F, 5, [combine(lam, self.a, F), combine(lam, self.b, F)])

    def ruling_lines(self) -> list[Subspace]:
        pts = Subspace.whole(self.field, 2).points()
        return [self.ruling_line(lam) for lam in pts]

    def extend(self, field: Field) -> "Regulus":
        return Regulus(field, self.a, self.b)

    def __len__(self):
        return len(self.params)

    def __repr__(self):
        return f"Regulus({len(self)} planes over {self.field})"


def regulus_from_three_planes(p1: Subspace, p2: Subspace, p3: Subspace,
                              a_basis: Sequence[Vector] | None = None) -> Regulus:
    """The unique 2-regulus through three pairwise disjoint planes of PG(5,F).

    plane(0) = p1, plane(inf) = p2, plane(1) = p3.
    """
    F = p1.field
    for x, y in ((p1, p2), (p1, p3), (p2, p3)):
        if x.meet(y).dim != -1:
            raise GeometryError("planes are not pairwise disjoint")
    a = list(a_basis) if a_basis is not None else list(p1.basis)
    # a_i = x_i + y_i, x_i in p2, y_i in p3 ; b_i = -x_i, c_i = y_i
    cols = list(p2.basis) + list(p3.basis)
    T = tuple(zip(*cols))  # 6x6, columns are the basis vectors
    Tinv = mat_inverse(T, F)
    b = []
    for ai in a:
        coef = mat_vec(Tinv, ai, F)
        x = combine(coef[:3], p2.basis, F)
        b.append(tuple(F.neg[v] for v in x))
    R = Regulus(F, a, b)
    assert R.plane(0) == p1 and R.plane(INF) == p2 and R.plane(1) == p3
    return R


@dataclass
class Spread2:
    planes: tuple[Subspace, ...]
    regular: bool | None = None


def is_partition(planes: Sequence[Subspace]) -> bool:
    F = planes[0].field
    total = (F.order ** 6 - 1) // (F.order - 1)
    seen: set[Vector] = set()
    count = 0
    for P in planes:
        pts = P.points()
        count += len(pts)
        seen.update(pts)
    return count == total == len(seen)


def regulus_triples(n: int, q: int, seed: int = 0) -> list[tuple[int, int, int]]:
    """Index triples tested by :func:`is_regular_spread`.

    All triples for q <= 3.  Otherwise every triple (0, 1, k) plus 100 further
    triples drawn with ``random.Random(seed)``.
    """
    if q <= 3:
        return list(itertools.combinations(range(n), 3))
    triples = [(0, 1, k) for k in range(2, n)]
    rng = random.Random(seed)
    chosen = set(triples)
    while len(triples) < n - 2 + 100:
        t = tuple(sorted(rng.sample(range(n), 3)))
        if t not in chosen:
            chosen.add(t)
            triples.append(t)
    return triples


def is_regular_spread(planes: Sequence[Subspace], witness: list | None = None) -> bool:
    """Regularity test on the triples given by :func:`regulus_triples`.

    If ``witness`` is a list, the first failing triple is appended to it.
    """
    planes = list(planes)
    F = planes[0].field
    q = F.order
    if len(planes) != q ** 3 + 1 or not is_partition(planes):
        raise GeometryError("input is not a 2-spread")
    members = set(planes)
    for i, j, k in regulus_triples(len(planes), q):
        R = regulus_from_three_planes(planes[i], planes[j], planes[k])
        if not R.plane_set <= members:
            if witness is not None:
                witness.append((i, j, k))
            return False
    return True
