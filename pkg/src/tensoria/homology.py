"""Second integral homology of a finite group, two independent ways.

The wedge route quotients a built tensor square by its fibre tensors and
takes the kernel of the induced pairing onto the derived subgroup.  The
cocycle route works in the normalized bar complex with integer
coefficients: the degree-two boundary embeds chains into a free module,
so the torsion of the cokernel of the degree-three boundary is exactly
the homology, and the free rank must come back equal to the rank of the
degree-two boundary or the computation is rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

from .abelian import AbelianGroup, cokernel_invariants, hnf_insert
from .errors import SizeLimitError
from .permgrp import PermGroup, abelian_invariants, perm_mul
from .tensor import TensorGroup, exterior_product

H2_COCYCLE_LIMIT = 64


def h2_via_cocycles(group: PermGroup, limit: int = H2_COCYCLE_LIMIT
                    ) -> AbelianGroup:
    """Schur multiplier from the normalized bar complex over Z."""
    n = group.order()
    if n > limit:
        raise SizeLimitError(
            f"bar complex needs order {n} > limit {limit}")
    els = group.elements()
    idx = {e: i for i, e in enumerate(els)}
    mul = [[idx[perm_mul(a, b)] for b in els] for a in els]
    n1 = n - 1
    n2 = n1 * n1

    if n1 == 0:
        return AbelianGroup()

    def col(a: int, b: int) -> int:
        # bar cell [a|b]; both arguments are nonidentity element ids
        return (a - 1) * n1 + (b - 1)

    d2_basis: dict[int, list[int]] = {}
    for a in range(1, n):
        for b in range(1, n):
            row = [0] * n1
            row[b - 1] += 1
            row[a - 1] += 1
            ab = mul[a][b]
            if ab:
                row[ab - 1] -= 1
            hnf_insert(d2_basis, row)
    rank_d2 = len(d2_basis)

    def d3_rows():
        seen: set[tuple] = set()
        for a in range(1, n):
            for b in range(1, n):
                ab = mul[a][b]
                for c in range(1, n):
                    bc = mul[b][c]
                    cells: dict[int, int] = {}

                    def put(x: int, y: int, s: int) -> None:
                        if x and y:
                            k = col(x, y)
                            cells[k] = cells.get(k, 0) + s

                    put(b, c, 1)
                    put(ab, c, -1)
                    put(a, bc, 1)
                    put(a, b, -1)
                    key = tuple(sorted(cells.items()))
                    if not cells or key in seen:
                        continue
                    seen.add(key)
                    row = [0] * n2
                    for k, v in cells.items():
                        row[k] = v
                    yield row

    coker = cokernel_invariants(d3_rows(), n2)
    if coker.free_rank != rank_d2:
        raise RuntimeError(
            "bar complex homology came out infinite for a finite group")
    return AbelianGroup(coker.invariants, 0)


def h2_via_wedge(t: TensorGroup) -> AbelianGroup:
    """Schur multiplier as the kernel of the pairing map on the exterior
    quotient of a tensor square."""
    if t.pair.g is not t.pair.h:
        raise ValueError("the wedge route needs a tensor square")
    ex = exterior_product(t)
    if not ex.kernel.is_abelian():
        raise RuntimeError("wedge pairing kernel is not abelian")
    return abelian_invariants(ex.kernel)


@dataclass(frozen=True)
class H2Report:
    group: str
    wedge: AbelianGroup
    cocycles: AbelianGroup
    agree: bool

    def to_json(self) -> dict:
        return {"group": self.group,
                "wedge": self.wedge.serialize(),
                "cocycles": self.cocycles.serialize(),
                "agree": self.agree}


def h2_cross_check(t: TensorGroup,
                   limit: int = H2_COCYCLE_LIMIT) -> H2Report:
    """Both multiplier computations on one built tensor square; the two
    routes share no machinery past the group itself."""
    wedge = h2_via_wedge(t)
    cocycles = h2_via_cocycles(t.pair.g.group, limit)
    return H2Report(t.pair.g.name or t.name, wedge, cocycles,
                    wedge == cocycles)
