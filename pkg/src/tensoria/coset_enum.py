"""Coset enumeration over a finite presentation.

The default strategy is relator scanning with immediate filling (HLT); a
definition-driven strategy ("felsch") is available behind a flag. Both
process coincidences eagerly through a union-find keyed by minimum
representative, finish with a closing sweep that rescans every relator at
every live coset until nothing changes, and hand back a standardized table
whose cosets are numbered in breadth-first order from the subgroup.

Cosets are numbered from 0 (the subgroup itself). A letter packs a
generator index with a direction: letter 2g steps by generator g, letter
2g+1 by its inverse, so letter ^ 1 is always the inverse letter.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import LimitExceeded
from .presentation import Presentation, Word, cyclic_reduce

DEFAULT_MAX_COSETS = 1_000_000
DEFAULT_SCAN_BUDGET = 400_000_000


@dataclass(frozen=True)
class EnumLimits:
    """Hard stops for an enumeration: table rows ever allocated, and total
    letters scanned (a proxy for time)."""

    max_cosets: int = DEFAULT_MAX_COSETS
    scan_budget: int = DEFAULT_SCAN_BUDGET


class CosetTable:
    """Completed, verified, standardized coset table."""

    def __init__(self, presentation: Presentation, subgroup: tuple[Word, ...],
                 rows: list[list[int]]):
        self.presentation = presentation
        self.subgroup = subgroup
        self._rows = rows

    @property
    def coset_count(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def follow(self, coset: int, gen: int, exp: int = 1) -> int:
        """Image of a coset under one generator power."""
        letter = 2 * gen if exp > 0 else 2 * gen + 1
        rows = self._rows
        for _ in range(abs(exp)):
            coset = rows[coset][letter]
        return coset

    def apply_word(self, coset: int, word: Word) -> int:
        for gen, exp in word.syllables:
            coset = self.follow(coset, gen, exp)
        return coset

    def permutation(self, gen: int) -> tuple[int, ...]:
        """The permutation of cosets induced by one generator."""
        col = 2 * gen
        return tuple(row[col] for row in self._rows)

    def permutations(self) -> list[tuple[int, ...]]:
        return [self.permutation(g) for g in range(self.presentation.ngens)]

    def verify(self) -> None:
        """Check completeness, inverse pairing, relator closure at every
        coset, and subgroup generator closure at coset 0."""
        n = len(self._rows)
        nletters = 2 * self.presentation.ngens
        for c, row in enumerate(self._rows):
            if len(row) != nletters or any(v is None or not 0 <= v < n for v in row):
                raise RuntimeError(f"coset table row {c} is incomplete")
            for x in range(nletters):
                if self._rows[row[x]][x ^ 1] != c:
                    raise RuntimeError(f"coset table inverse pairing broken at {c}")
        for rel in self.presentation.relators:
            for c in range(n):
                if self.apply_word(c, rel) != c:
                    raise RuntimeError(
                        f"relator {rel!r} does not close at coset {c}")
        for w in self.subgroup:
            if self.apply_word(0, w) != 0:
                raise RuntimeError(f"subgroup word {w!r} moves coset 0")


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup: tuple[Word, ...],
                 limits: EnumLimits, strategy: str):
        self.pres = pres
        self.nletters = 2 * pres.ngens
        self.limits = limits
        self.strategy = strategy
        self.rel_letters = []
        for rel in pres.relators:
            red = cyclic_reduce(rel)
            if not red.is_identity:
                self.rel_letters.append(red.letters())
        self.sub_letters = []
        for w in subgroup:
            if w.max_generator() >= pres.ngens:
                raise ValueError("subgroup word uses an unknown generator")
            if not w.is_identity:
                self.sub_letters.append(w.letters())
        self.table: list[list[int | None]] = [[None] * self.nletters]
        self.p = [0]
        self.live = 1
        self.q: list[int] = []
        self.work = 0
        self.dirty = False
        self.deductions: list[tuple[int, int]] = []
        if strategy == "felsch":
            self.rotations = self._rotations_by_letter()
        elif strategy != "hlt":
            raise ValueError(f"unknown enumeration strategy {strategy!r}")

    def _rotations_by_letter(self) -> list[list[list[int]]]:
        by: list[list[list[int]]] = [[] for _ in range(self.nletters)]
        seen: set[tuple[int, ...]] = set()
        for letters in self.rel_letters:
            inverse = [x ^ 1 for x in reversed(letters)]
            for base in (letters, inverse):
                for i in range(len(base)):
                    rot = tuple(base[i:] + base[:i])
                    if rot not in seen:
                        seen.add(rot)
                        by[rot[0]].append(list(rot))
        return by

    # -- union-find over cosets, minimum representative wins

    def _rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def _merge(self, a: int, b: int) -> None:
        a, b = self._rep(a), self._rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        self.q.append(b)
        self.live -= 1
        self.dirty = True

    def _coincidence(self, a: int, b: int) -> None:
        self._merge(a, b)
        table = self.table
        qi = 0
        while qi < len(self.q):
            gamma = self.q[qi]
            qi += 1
            self.work += self.nletters
            row = table[gamma]
            for x in range(self.nletters):
                delta = row[x]
                if delta is None:
                    continue
                table[delta][x ^ 1] = None
                mu = self._rep(gamma)
                nu = self._rep(delta)
                if table[mu][x] is not None:
                    self._merge(nu, table[mu][x])
                elif table[nu][x ^ 1] is not None:
                    self._merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu
                    if self.strategy == "felsch":
                        self.deductions.append((mu, x))
                        self.deductions.append((nu, x ^ 1))
        self.q.clear()
        if self.work > self.limits.scan_budget:
            raise LimitExceeded(
                f"scan budget {self.limits.scan_budget} exhausted",
                "scan_budget", self.limits.scan_budget)

    def _define(self, alpha: int, x: int) -> int:
        if len(self.table) >= self.limits.max_cosets:
            raise LimitExceeded(
                f"coset limit {self.limits.max_cosets} reached "
                f"({self.live} live of {len(self.table)} allocated)",
                "max_cosets", self.limits.max_cosets)
        beta = len(self.table)
        self.table.append([None] * self.nletters)
        self.p.append(beta)
        self.table[alpha][x] = beta
        self.table[beta][x ^ 1] = alpha
        self.live += 1
        self.work += 1
        self.dirty = True
        if self.strategy == "felsch":
            self.deductions.append((alpha, x))
            self.deductions.append((beta, x ^ 1))
        return beta

    def _scan_and_fill(self, alpha: int, w: list[int]) -> None:
        """Scan a relator at a coset from both ends, defining cosets to
        close any gap wider than one letter."""
        self.work += len(w)
        if self.work > self.limits.scan_budget:
            raise LimitExceeded(
                f"scan budget {self.limits.scan_budget} exhausted",
                "scan_budget", self.limits.scan_budget)
        table = self.table
        f = alpha
        i = 0
        b = alpha
        j = len(w) - 1
        while True:
            while i <= j:
                nxt = table[f][w[i]]
                if nxt is None:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i:
                nxt = table[b][w[j] ^ 1]
                if nxt is None:
                    break
                b = nxt
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                self.dirty = True
                if self.strategy == "felsch":
                    self.deductions.append((f, w[i]))
                    self.deductions.append((b, w[i] ^ 1))
                return
            self._define(f, w[i])

    def _scan(self, alpha: int, w: list[int]) -> None:
        """Scan without filling; record a deduction when the gap is exactly
        one letter, a coincidence when the ends meet wrongly."""
        self.work += len(w)
        table = self.table
        f = alpha
        i = 0
        b = alpha
        j = len(w) - 1
        while i <= j:
            nxt = table[f][w[i]]
            if nxt is None:
                break
            f = nxt
            i += 1
        if i > j:
            if f != b:
                self._coincidence(f, b)
            return
        while j >= i:
            nxt = table[b][w[j] ^ 1]
            if nxt is None:
                break
            b = nxt
            j -= 1
        if j < i:
            self._coincidence(f, b)
        elif j == i:
            table[f][w[i]] = b
            table[b][w[i] ^ 1] = f
            self.dirty = True
            self.deductions.append((f, w[i]))
            self.deductions.append((b, w[i] ^ 1))

    def _process_deductions(self) -> None:
        while self.deductions:
            alpha, x = self.deductions.pop()
            alpha = self._rep(alpha)
            for w in self.rotations[x]:
                self._scan(alpha, w)
                if self.p[alpha] != alpha:
                    break
            if self.work > self.limits.scan_budget:
                raise LimitExceeded(
                    f"scan budget {self.limits.scan_budget} exhausted",
                    "scan_budget", self.limits.scan_budget)

    def run(self) -> CosetTable:
        for w in self.sub_letters:
            self._scan_and_fill(0, w)
            if self.strategy == "felsch":
                self._process_deductions()
        if self.strategy == "hlt":
            alpha = 0
            while alpha < len(self.table):
                if self.p[alpha] == alpha:
                    for w in self.rel_letters:
                        self._scan_and_fill(alpha, w)
                        if self.p[alpha] != alpha:
                            break
                    if self.p[alpha] == alpha:
                        row = self.table[alpha]
                        for x in range(self.nletters):
                            if row[x] is None:
                                self._define(alpha, x)
                alpha += 1
        else:
            while True:
                grew = False
                alpha = 0
                while alpha < len(self.table):
                    while self.p[alpha] == alpha:
                        row = self.table[alpha]
                        x = next((i for i in range(self.nletters)
                                  if row[i] is None), None)
                        if x is None:
                            break
                        grew = True
                        self._define(alpha, x)
                        self._process_deductions()
                    alpha += 1
                if not grew:
                    break
        # closing sweep: rescan everything until a pass changes nothing, so
        # both strategies end at the same closed table
        while True:
            self.dirty = False
            for w in self.sub_letters:
                self._scan_and_fill(0, w)
            alpha = 0
            while alpha < len(self.table):
                if self.p[alpha] == alpha:
                    for w in self.rel_letters:
                        self._scan_and_fill(alpha, w)
                        if self.p[alpha] != alpha:
                            break
                alpha += 1
            alpha = 0
            while alpha < len(self.table):
                if self.p[alpha] == alpha:
                    row = self.table[alpha]
                    for x in range(self.nletters):
                        if row[x] is None:
                            self._define(alpha, x)
                alpha += 1
            if not self.dirty:
                break
        return self._finish()

    def _finish(self) -> CosetTable:
        """Renumber live cosets in breadth-first order from coset 0."""
        live = sum(1 for k in range(len(self.table)) if self.p[k] == k)
        order = [0]
        new_of = {0: 0}
        qi = 0
        while qi < len(order):
            old = order[qi]
            qi += 1
            row = self.table[old]
            for x in range(self.nletters):
                v = self._rep(row[x])
                if v not in new_of:
                    new_of[v] = len(order)
                    order.append(v)
        if len(order) != live:
            raise RuntimeError("coset table is not transitive")
        rows = [[new_of[self._rep(self.table[old][x])]
                 for x in range(self.nletters)] for old in order]
        return CosetTable(self.pres, tuple(), rows)


def enumerate_cosets(pres: Presentation, subgroup=(), limits: EnumLimits | None = None,
                     strategy: str = "hlt") -> CosetTable:
    """Enumerate the cosets of the subgroup generated by the given words
    (the whole-group enumeration when empty). Raises LimitExceeded when a
    budget runs out, so callers can distinguish too-big from wrong."""
    subgroup = tuple(subgroup)
    limits = limits or EnumLimits()
    enum = _Enumerator(pres, subgroup, limits, strategy)
    table = enum.run()
    table.subgroup = subgroup
    table.verify()
    return table
