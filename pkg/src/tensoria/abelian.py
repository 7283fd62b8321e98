"""Finitely generated abelian groups in invariant factor form, integer
matrix normal forms, tensor and exterior squares of Z-modules, and the
quadratic functor computed from its defining presentation.

Matrices are lists of rows of Python ints, so every computation here is
exact at arbitrary precision.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from .errors import SizeLimitError

IntMatrix = list[list[int]]


# ---------------------------------------------------------------------------
# Integer matrices


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shape mismatch")
    cols = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def determinant(m: IntMatrix) -> int:
    """Fraction-free Gaussian elimination (Bareiss); exact over Z."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (d, l, r) with l*m*r = d diagonal, d[i][i] dividing d[i+1][i+1],
    nonnegative diagonal, and l, r unimodular."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [row[:] for row in m]
    left = identity_matrix(rows)
    right = identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        arow, lsrc = a[src], left[src]
        adst, ldst = a[dst], left[dst]
        for k in range(cols):
            adst[k] += q * arow[k]
        for k in range(rows):
            ldst[k] += q * lsrc[k]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        # pick the smallest nonzero entry in the remaining block as pivot
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
            nz = [i for i in range(t + 1, rows) if a[i][t]]
            if nz:
                swap_rows(t, nz[0])
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
            nzc = [j for j in range(t + 1, cols) if a[t][j]]
            if nzc:
                swap_cols(t, nzc[0])
                continue
            break
        if a[t][t] < 0:
            for k in range(cols):
                a[t][k] = -a[t][k]
            for k in range(rows):
                left[t][k] = -left[t][k]
        # enforce divisibility of later entries by the pivot
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1
    return a, left, right


def hnf_insert(basis: dict[int, list[int]], row: list[int]) -> None:
    """Reduce a row against an echelon basis keyed by pivot column, adding
    what remains. Mutates both arguments."""
    n = len(row)
    c = 0
    while c < n:
        if row[c] == 0:
            c += 1
            continue
        piv = basis.get(c)
        if piv is None:
            if row[c] < 0:
                for k in range(c, n):
                    row[k] = -row[k]
            basis[c] = row
            return
        while row[c]:
            q = row[c] // piv[c]
            if q:
                for k in range(c, n):
                    row[k] -= q * piv[k]
            if row[c]:
                # remainder became the smaller leading value; swap roles
                piv[c:], row[c:] = row[c:], piv[c:]
        c += 1


def cokernel_invariants(rows, ncols: int) -> "AbelianGroup":
    """Structure of Z^ncols modulo the row span: torsion invariant factors
    plus free rank."""
    basis: dict[int, list[int]] = {}
    for row in rows:
        if len(row) != ncols:
            raise ValueError("row length mismatch")
        hnf_insert(basis, list(row))
    compact = [basis[c] for c in sorted(basis)]
    diag, _, _ = smith_normal_form(compact) if compact else ([], [], [])
    nonzero = [diag[i][i] for i in range(min(len(diag), ncols)) if diag[i][i]]
    free = ncols - len(nonzero)
    return AbelianGroup.from_cyclic_orders([d for d in nonzero] + [0] * free)


# ---------------------------------------------------------------------------
# Canonical abelian groups


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """Invariant factors in ascending divisibility order, each at least 2,
    plus a free rank. Constructed canonically."""

    invariants: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for d in self.invariants:
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    @classmethod
    def from_cyclic_orders(cls, parts) -> "AbelianGroup":
        """Canonicalize a multiset of cyclic orders; 0 stands for Z."""
        free = sum(1 for p in parts if p == 0)
        primes: dict[int, list[int]] = {}
        for p in parts:
            if p < 0:
                raise ValueError("cyclic orders must be nonnegative")
            if p in (0, 1):
                continue
            for q, e in _factorize(p).items():
                primes.setdefault(q, []).append(e)
        depth = max((len(v) for v in primes.values()), default=0)
        factors = []
        for i in range(depth):
            f = 1
            for q, exps in primes.items():
                exps_sorted = sorted(exps, reverse=True)
                if i < len(exps_sorted):
                    f *= q ** exps_sorted[i]
            factors.append(f)
        return cls(tuple(sorted(factors)), free)

    @property
    def is_trivial(self) -> bool:
        return not self.invariants and not self.free_rank

    def order(self) -> int | None:
        if self.free_rank:
            return None
        n = 1
        for d in self.invariants:
            n *= d
        return n

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.invariants[-1] if self.invariants else 1

    def serialize(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{d}" for d in self.invariants]
        return " x ".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants), "free_rank": self.free_rank}

    def __str__(self) -> str:
        return self.serialize()

    def cyclic_parts(self) -> list[int]:
        return [0] * self.free_rank + list(self.invariants)

    def elements(self) -> list[tuple[int, ...]]:
        if self.free_rank:
            raise SizeLimitError("cannot enumerate an infinite abelian group")
        return list(itertools.product(*(range(d) for d in self.invariants)))

    def add(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariants))

    def neg(self, x: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(x, self.invariants))


def z_tensor(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    """Tensor product over Z via gcds of cyclic orders."""
    parts = []
    for da in a.cyclic_parts():
        for db in b.cyclic_parts():
            if da == 0 and db == 0:
                parts.append(0)
            elif da == 0:
                parts.append(db)
            elif db == 0:
                parts.append(da)
            else:
                parts.append(gcd(da, db))
    return AbelianGroup.from_cyclic_orders(parts)


def z_tensor_power(a: AbelianGroup, n: int) -> AbelianGroup:
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    out = a
    for _ in range(n - 1):
        out = z_tensor(out, a)
    return out


def lambda2_exterior(a: AbelianGroup) -> AbelianGroup:
    """Exterior square of a finite abelian group: gcds over index pairs."""
    if a.free_rank:
        raise SizeLimitError("exterior square implemented for finite groups only")
    inv = a.invariants
    parts = [gcd(inv[i], inv[j]) for i in range(len(inv)) for j in range(i + 1, len(inv))]
    return AbelianGroup.from_cyclic_orders(parts)


GAMMA_MAX_ORDER = 64


def gamma_whitehead(a: AbelianGroup) -> AbelianGroup:
    """Quadratic functor of a finite abelian group, computed from its
    defining presentation: one generator w(x) per element, relations
    w(-x) = w(x) and the cube relation
    w(x+y+z) - w(x+y) - w(y+z) - w(x+z) + w(x) + w(y) + w(z) = 0."""
    order = a.order()
    if order is None:
        raise SizeLimitError("quadratic functor implemented for finite groups only")
    if order > GAMMA_MAX_ORDER:
        raise SizeLimitError(
            f"quadratic functor limited to order {GAMMA_MAX_ORDER}, got {order}"
        )
    elements = a.elements()
    index = {el: i for i, el in enumerate(elements)}
    n = len(elements)
    rows: set[tuple[int, ...]] = set()
    for el in elements:
        row = [0] * n
        row[index[a.neg(el)]] += 1
        row[index[el]] -= 1
        if any(row):
            rows.add(tuple(row))
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        x, y, z = elements[i], elements[j], elements[k]
        row = [0] * n
        row[index[a.add(a.add(x, y), z)]] += 1
        row[index[a.add(x, y)]] -= 1
        row[index[a.add(y, z)]] -= 1
        row[index[a.add(x, z)]] -= 1
        row[index[x]] += 1
        row[index[y]] += 1
        row[index[z]] += 1
        if any(row):
            rows.add(tuple(row))
    result = cokernel_invariants(sorted(rows), n)
    if result.free_rank:
        raise RuntimeError("quadratic functor of a finite group came out infinite")
    return result
