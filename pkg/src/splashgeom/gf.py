"""Finite field tower GF(p) <= GF(q) <= GF(q^3).

Field elements are plain ints.  An element of GF(q) = GF(p)[x]/f is the
coefficient array (c_0, ..., c_{d-1}) packed least significant first as
``sum(c_i * p**i)``; an element a0 + a1*tau + a2*tau^2 of GF(q^3) is packed
as ``a0 + a1*q + a2*q**2``.  The two encodings agree on GF(q), so a vector
over GF(q) is already a vector over GF(q^3) with no conversion.

The canonical element order is the order of these integer codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

# Monic irreducible (Conway) polynomials, coefficients low -> high.
BASE_POLYS: dict[int, tuple[int, int, tuple[int, ...]]] = {
    2: (2, 1, (0, 1)),
    3: (3, 1, (0, 1)),
    4: (2, 2, (1, 1, 1)),
    5: (5, 1, (0, 1)),
    7: (7, 1, (0, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (2, 2, 1)),
}

SUPPORTED_Q = tuple(sorted(BASE_POLYS))


class FieldError(ValueError):
    pass


class Field:
    """A finite field on the codes ``0 .. order-1`` backed by full tables.

    ``add``, ``mul`` are 2-D lists and ``neg``, ``inv`` are lists, indexed by
    codes; hot loops index them directly.
    """

    def __init__(self, p: int, order: int, add, mul):
        self.p = p
        self.order = order
        self.add: list[list[int]] = add
        self.mul: list[list[int]] = mul
        self.neg = [row.index(0) for row in add]
        self.inv: list[int | None] = [None] + [mul[a].index(1) for a in range(1, order)]
        self.sub = [[add[a][self.neg[b]] for b in range(order)] for a in range(order)]

    def __repr__(self):
        return f"GF({self.order})"

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        return self.mul[a][self.inv[b]]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in " + repr(self))
        return self.inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inverse(a), -e
        r, mul = 1, self.mul
        while e:
            if e & 1:
                r = mul[r][a]
            a = mul[a][a]
            e >>= 1
        return r

    def sum(self, items) -> int:
        add, s = self.add, 0
        for x in items:
            s = add[s][x]
        return s

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        add, mul, s = self.add, self.mul, 0
        for a, b in zip(u, v):
            if a and b:
                s = add[s][mul[a][b]]
        return s

    @cached_property
    def np_tables(self):
        """(add, mul, inv) as numpy arrays; inv[0] is 0."""
        return (np.array(self.add), np.array(self.mul),
                np.array([0] + self.inv[1:]))


def _poly_mulmod(a, b, mod, p):
    """Multiply coefficient lists modulo the monic ``mod`` over GF(p)."""
    d = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * mod[j]) % p
    return prod[:d] + [0] * (d - len(prod[:d]))


def base_field(p: int, d: int, poly: Sequence[int]) -> Field:
    """GF(p^d) = GF(p)[x]/poly with packed little-endian coefficient codes."""
    q = p ** d
    if len(poly) != d + 1 or poly[-1] != 1:
        raise FieldError(f"base polynomial must be monic of degree {d}")
    digits = [[(c // p ** i) % p for i in range(d)] for c in range(q)]

    def pack(ds):
        return sum(x * p ** i for i, x in enumerate(ds))

    add = [[pack([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
           for a in range(q)]
    if d == 1:
        mul = [[(a * b) % p for b in range(q)] for a in range(q)]
    else:
        mul = [[pack(_poly_mulmod(digits[a], digits[b], poly, p)) for b in range(q)]
               for a in range(q)]
    try:
        return Field(p, q, add, mul)
    except ValueError:  # some element has no inverse
        raise FieldError("base polynomial is not irreducible") from None


class CubicExtension(Field):
    """GF(q^3) = GF(q)[x]/(x^3 - t2 x^2 - t1 x - t0), tau = class of x.

    ``mul_direct`` multiplies by polynomial reduction only.  The tables used
    by ``mul`` come from log/antilog tables of tau and are checked against
    ``mul_direct`` in the test-suite.
    """

    def __init__(self, base: Field, t0: int, t1: int, t2: int):
        self.base = base
        self.t = (t0, t1, t2)
        q = base.order
        Q = q ** 3
        antilog = _tau_powers(base, self.t)
        if len(antilog) != Q - 1:
            raise FieldError(
                f"x^3 - {t2}x^2 - {t1}x - {t0} has a root of order {len(antilog)}, not {Q - 1}")
        self.antilog = antilog
        log = [-1] * Q
        for i, a in enumerate(antilog):
            log[a] = i
        self.log = log

        codes = np.arange(Q)
        dig = np.stack([(codes // q ** i) % q for i in range(3)])
        badd = np.array(base.add)
        add = sum(badd[dig[i][:, None], dig[i][None, :]] * q ** i for i in range(3))
        L = np.array(log)
        AL = np.array(antilog)
        mul = AL[(L[:, None] + L[None, :]) % (Q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        super().__init__(base.p, Q, add.tolist(), mul.tolist())

    def __repr__(self):
        return f"GF({self.base.order}^3)"

    def coords(self, a: int) -> tuple[int, int, int]:
        q = self.base.order
        return (a % q, (a // q) % q, a // (q * q))

    def elem(self, coords: Sequence[int]) -> int:
        q = self.base.order
        return coords[0] + coords[1] * q + coords[2] * q * q

    def mul_direct(self, a: int, b: int) -> int:
        B = self.base
        badd, bmul = B.add, B.mul
        x, y = self.coords(a), self.coords(b)
        c = [0] * 5
        for i in range(3):
            for j in range(3):
                c[i + j] = badd[c[i + j]][bmul[x[i]][y[j]]]
        t0, t1, t2 = self.t
        for k in (4, 3):
            ck = c[k]
            if ck:
                c[k] = 0
                c[k - 3] = badd[c[k - 3]][bmul[ck][t0]]
                c[k - 2] = badd[c[k - 2]][bmul[ck][t1]]
                c[k - 1] = badd[c[k - 1]][bmul[ck][t2]]
        return self.elem(c[:3])


def _times_tau(B: Field, t, a: int) -> int:
    q = B.order
    a0, a1, a2 = a % q, (a // q) % q, a // (q * q)
    t0, t1, t2 = t
    # tau^3 = t0 + t1 tau + t2 tau^2
    return B.mul[a2][t0] + B.add[a0][B.mul[a2][t1]] * q + B.add[a1][B.mul[a2][t2]] * q * q


def _tau_powers(B: Field, t) -> list[int]:
    """[1, tau, tau^2, ...] up to the multiplicative order of tau, or [] if tau is not a unit."""
    powers = [1]
    x = _times_tau(B, t, 1)
    while x not in (0, 1) and len(powers) < B.order ** 3:
        powers.append(x)
        x = _times_tau(B, t, x)
    return powers if x == 1 else []


def primitive_polys(q: int) -> Iterator[tuple[int, int, int]]:
    """All (t0, t1, t2) with x^3 - t2 x^2 - t1 x - t0 primitive over GF(q).

    Yielded in increasing order of the code t0 + t1*q + t2*q^2.
    """
    if q not in BASE_POLYS:
        raise FieldError(f"unsupported q={q}; supported: {SUPPORTED_Q}")
    base = base_field(*BASE_POLYS[q])
    for code in range(q ** 3):
        t0, t1, t2 = code % q, (code // q) % q, code // (q * q)
        if t0 and _cubic_irreducible(base, t0, t1, t2) and \
                len(_tau_powers(base, (t0, t1, t2))) == q ** 3 - 1:
            yield (t0, t1, t2)


def _cubic_irreducible(F: Field, t0, t1, t2) -> bool:
    # a cubic is irreducible iff it has no root
    for x in F.elements():
        x2 = F.mul[x][x]
        v = F.sub[F.sub[F.sub[F.mul[x2][x]][F.mul[t2][x2]]][F.mul[t1][x]]][t0]
        if v == 0:
            return False
    return True


def find_primitive_poly(q: int) -> tuple[int, int, int]:
    return next(primitive_polys(q))


@dataclass(frozen=True)
class TransversalFrame:
    p0: int
    p1: int
    p2: int
    eta: int

    @property
    def A(self) -> tuple[int, int, int]:
        return (self.p0, self.p1, self.p2)


class FieldTower:
    """GF(p) <= GF(q) <= GF(q^3) with a primitive tau and basis {1, tau, tau^2}."""

    def __init__(self, q: int, t: tuple[int, int, int] | None = None,
                 base_poly: Sequence[int] | None = None):
        if q not in BASE_POLYS:
            raise FieldError(f"unsupported q={q}; supported: {SUPPORTED_Q}")
        p, d, poly = BASE_POLYS[q]
        if base_poly is not None:
            poly = tuple(base_poly)
        self.p, self.d, self.q = p, d, q
        self.base_poly = tuple(poly)
        self.base = base_field(p, d, poly)
        if t is None:
            t = find_primitive_poly(q) if base_poly is None else next(self._primitive_over_base())
        t = tuple(t)
        if len(t) != 3 or not all(0 <= x < q for x in t):
            raise FieldError(f"bad coefficient triple {t}")
        if t[0] == 0 or not _cubic_irreducible(self.base, *t):
            raise FieldError(f"x^3 - t2 x^2 - t1 x - t0 with t={t} is not irreducible")
        self.t0, self.t1, self.t2 = t
        self.ext = CubicExtension(self.base, *t)
        self.Q = q ** 3
        self.tau = q  # code of 0 + 1*tau + 0*tau^2
        self._N = self._build_frobenius_matrix()
        self._frob = [self.ext.elem(self.mat_vec(self._N, self.coords(a))) for a in range(self.Q)]

    def _primitive_over_base(self):
        q = self.q
        for code in range(q ** 3):
            t = (code % q, (code // q) % q, code // (q * q))
            if t[0] and _cubic_irreducible(self.base, *t) and \
                    len(_tau_powers(self.base, t)) == q ** 3 - 1:
                yield t

    # -- tokens ---------------------------------------------------------

    def token(self) -> str:
        poly = "".join(str(c) for c in self.base_poly)
        return f"{self.p}^{self.d}:{poly}:{self.t0},{self.t1},{self.t2}"

    @classmethod
    def from_token(cls, token: str) -> "FieldTower":
        """Parse ``p^d:basepoly:t0,t1,t2`` (basepoly digits low -> high)."""
        try:
            pd, poly, ts = token.split(":")
            p, d = (int(x) for x in pd.split("^"))
            coeffs = tuple(int(c) for c in poly)
            t = tuple(int(x) for x in ts.split(","))
        except ValueError as exc:
            raise FieldError(f"malformed tower token {token!r}") from exc
        if BASE_POLYS.get(p ** d, (None, None))[:2] != (p, d):
            raise FieldError(f"unsupported q={p}^{d}")
        return cls(p ** d, t, coeffs)

    def __repr__(self):
        return f"FieldTower({self.token()})"

    # -- coordinates ----------------------------------------------------

    def coords(self, a: int) -> tuple[int, int, int]:
        """[a] = (a0, a1, a2) with a = a0 + a1 tau + a2 tau^2."""
        return self.ext.coords(a)

    def elem(self, coords: Sequence[int]) -> int:
        return self.ext.elem(coords)

    def mat_vec(self, M, v, F: Field | None = None):
        F = F or self.base
        return tuple(F.dot(row, v) for row in M)

    def tau_pow(self, i: int) -> int:
        return self.ext.pow(self.tau, i)

    # -- arithmetic -----------------------------------------------------

    def frob(self, a: int, i: int = 1) -> int:
        """a^(q^i), via the precomputed Frobenius matrix."""
        for _ in range(i % 3):
            a = self._frob[a]
        return a

    def norm(self, a: int) -> int:
        m = self.ext.mul
        return m[m[a][self._frob[a]]][self._frob[self._frob[a]]]

    def in_base(self, a: int) -> bool:
        return a < self.q

    def conj_vec(self, v: Sequence[int], i: int = 1) -> tuple[int, ...]:
        """Entrywise Frobenius x -> x^(q^i) of a vector over GF(q^3)."""
        return tuple(self.frob(x, i) for x in v)

    def mult_matrix(self, k: int):
        """M_k over GF(q) with M_k [x] = [k x]; rows as tuples."""
        cols = [self.coords(self.ext.mul[k][self.tau_pow(c)]) for c in range(3)]
        return tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))

    def _build_frobenius_matrix(self):
        cols = [self.coords(self.ext.pow(self.tau_pow(c), self.q)) for c in range(3)]
        return tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))

    def frobenius_matrix(self):
        """N over GF(q) with N [y] = [y^q]."""
        return self._N

    @cached_property
    def frame(self) -> TransversalFrame:
        E = self.ext
        tau = self.tau
        tau2 = E.mul[tau][tau]
        p0 = E.sub[E.add[self.t1][E.mul[self.t2][tau]]][tau2]
        p1 = E.sub[self.t2][tau]
        p2 = E.neg[1]
        eta = E.add[E.add[p0][E.mul[p1][tau]]][E.mul[p2][tau2]]
        return TransversalFrame(p0, p1, p2, eta)

    def U(self, i: int):
        """(p0 I + p1 M_tau + p2 M_tau^2)^(q^i), entries over GF(q^3)."""
        E = self.ext
        f = self.frame
        I = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        Mt = self.mult_matrix(self.tau)
        Mt2 = self.mult_matrix(self.tau_pow(2))
        rows = []
        for r in range(3):
            rows.append(tuple(
                self.frob(E.add[E.add[E.mul[f.p0][I[r][c]]][E.mul[f.p1][Mt[r][c]]]][E.mul[f.p2][Mt2[r][c]]], i)
                for c in range(3)))
        return tuple(rows)

    @cached_property
    def splash_labels(self) -> tuple[int, ...]:
        """The kernel {k : k^(q^2+q+1) = 1}, sorted by code."""
        q = self.q
        return tuple(sorted(self.tau_pow((q - 1) * i) for i in range(q * q + q + 1)))
