"""Permutation groups on {0..n-1} with deterministic stabilizer chains.

Permutations are image tuples acting on the right: x^(p*q) = (x^p)^q, so
perm_mul(p, q) applies p first. Chains are built by the classic
Schreier-Sims procedure with no randomization; base points are taken from
an optional prescribed list first (kernels stabilize target points that
way) and otherwise as the lowest point moved by the witness generator, so
every derived quantity is reproducible.
"""
from __future__ import annotations

from math import lcm
from typing import Iterable, Sequence

from .abelian import AbelianGroup, _factorize
from .coset_enum import EnumLimits, enumerate_cosets
from .errors import LimitExceeded, SizeLimitError
from .presentation import Presentation, Word, cyclic_reduce, gen_word

Perm = tuple[int, ...]

ELEMENT_LIMIT = 100_000
CENTER_LIMIT = 10_000


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return tuple(map(q.__getitem__, p))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_pow(p: Perm, n: int) -> Perm:
    if n < 0:
        p = perm_inverse(p)
        n = -n
    out = identity_perm(len(p))
    while n:
        if n & 1:
            out = perm_mul(out, p)
        p = perm_mul(p, p)
        n >>= 1
    return out


def perm_conjugate(p: Perm, by: Perm) -> Perm:
    """Right conjugate by^-1 * p * by."""
    return perm_mul(perm_mul(perm_inverse(by), p), by)


def perm_commutator(a: Perm, b: Perm) -> Perm:
    return perm_mul(perm_mul(perm_inverse(a), perm_inverse(b)), perm_mul(a, b))


def perm_order(p: Perm) -> int:
    cycs = perm_cycles(p)
    return lcm(*(len(c) for c in cycs)) if cycs else 1


def perm_cycles(p: Perm) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its smallest point."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycles_text(p: Perm) -> str:
    cycs = perm_cycles(p)
    if not cycs:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)


def perm_from_cycles(degree: int, cycles: Iterable[Iterable[int]]) -> Perm:
    out = list(range(degree))
    for cyc in cycles:
        cyc = list(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            out[a] = b
    return tuple(out)


def word_eval(word: Word, images: Sequence[Perm], degree: int) -> Perm:
    out = identity_perm(degree)
    for g, e in word.syllables:
        out = perm_mul(out, perm_pow(images[g], e))
    return out


def element_words_over(gens: Sequence[Perm], degree: int,
                       limit: int = ELEMENT_LIMIT) -> dict[Perm, Word]:
    """Breadth-first word for every element of the group the given list
    generates, with letters indexing the list as passed (identity entries
    allowed, they just contribute nothing)."""
    ident = identity_perm(degree)
    steps: list[tuple[Perm, Word]] = []
    for i, g in enumerate(gens):
        if g != ident:
            steps.append((g, Word([(i, 1)])))
            steps.append((perm_inverse(g), Word([(i, -1)])))
    words: dict[Perm, Word] = {ident: Word()}
    queue = [ident]
    qi = 0
    while qi < len(queue):
        e = queue[qi]
        qi += 1
        for g, step in steps:
            f = perm_mul(e, g)
            if f not in words:
                if len(words) >= limit:
                    raise SizeLimitError(
                        f"element enumeration passed the limit {limit}")
                words[f] = words[e] * step
                queue.append(f)
    return words


class _Level:
    __slots__ = ("point", "gens", "orbit", "orbit_order", "dirty", "verified")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[Perm] = []
        self.orbit: dict[int, Perm] = {}
        self.orbit_order: list[int] = []
        self.dirty = True
        self.verified = False


class PermGroup:
    """Group generated by a list of permutations of common degree."""

    def __init__(self, generators: Iterable[Perm], degree: int | None = None,
                 prescribed_base: tuple[int, ...] = ()):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for an empty generator list")
            degree = len(gens[0])
        self.degree = degree
        ident = tuple(range(degree))
        seen: set[Perm] = set()
        kept: list[Perm] = []
        for g in gens:
            if len(g) != degree or sorted(g) != list(ident):
                raise ValueError("generator is not a permutation of the degree")
            if g != ident and g not in seen:
                seen.add(g)
                kept.append(g)
        self.generators: list[Perm] = kept
        self.identity: Perm = ident
        for b in prescribed_base:
            if not 0 <= b < degree:
                raise ValueError("prescribed base point out of range")
        self._prescribed = tuple(prescribed_base)
        self._levels: list[_Level] | None = None
        self._order: int | None = None
        self._elements: list[Perm] | None = None
        self._element_words: dict[Perm, Word] | None = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    # -- stabilizer chain

    def _close_orbit(self, idx: int) -> None:
        lvl = self._levels[idx]
        lvl.orbit = {lvl.point: self.identity}
        lvl.orbit_order = [lvl.point]
        qi = 0
        while qi < len(lvl.orbit_order):
            x = lvl.orbit_order[qi]
            qi += 1
            ux = lvl.orbit[x]
            for s in lvl.gens:
                y = s[x]
                if y not in lvl.orbit:
                    lvl.orbit[y] = perm_mul(ux, s)
                    lvl.orbit_order.append(y)
        lvl.dirty = False

    def _add_strong(self, g: Perm, origin: int) -> int:
        """Record a new strong generator; returns the level it belongs to.
        The generator is added to every level set it qualifies for past the
        origin level that produced it."""
        levels = self._levels
        d = 0
        while d < len(levels) and g[levels[d].point] == levels[d].point:
            d += 1
        if d == len(levels):
            while True:
                if self._presc_ptr < len(self._prescribed):
                    b = self._prescribed[self._presc_ptr]
                    self._presc_ptr += 1
                else:
                    b = next(x for x in range(self.degree) if g[x] != x)
                levels.append(_Level(b))
                if g[b] != b:
                    d = len(levels) - 1
                    break
        for l in range(origin + 1, d + 1):
            levels[l].gens.append(g)
            levels[l].dirty = True
            levels[l].verified = False
        return d

    def _sift_from(self, p: Perm, start: int) -> tuple[Perm, int]:
        """Reduce p through chain levels from start on; returns the residue
        and the index of the level where reduction stopped (len(levels) if
        it ran through)."""
        levels = self._levels
        for idx in range(start, len(levels)):
            lvl = levels[idx]
            x = p[lvl.point]
            if x == lvl.point:
                continue
            u = lvl.orbit.get(x)
            if u is None:
                return p, idx
            p = perm_mul(p, perm_inverse(u))
        return p, len(levels)

    def _verify_level(self, idx: int) -> int | None:
        """Check every Schreier generator of one level; on failure install
        the residue as a strong generator and return its level."""
        lvl = self._levels[idx]
        ident = self.identity
        for x in lvl.orbit_order:
            ux = lvl.orbit[x]
            for s in lvl.gens:
                y = s[x]
                sg = perm_mul(perm_mul(ux, s), perm_inverse(lvl.orbit[y]))
                if sg == ident:
                    continue
                residue, _ = self._sift_from(sg, idx + 1)
                if residue != ident:
                    return self._add_strong(residue, idx)
        return None

    def _ensure_chain(self) -> None:
        if self._levels is not None:
            return
        self._levels = []
        self._presc_ptr = 0
        for g in self.generators:
            self._add_strong(g, -1)
        i = len(self._levels) - 1
        while i >= 0:
            lvl = self._levels[i]
            if lvl.dirty:
                self._close_orbit(i)
            if lvl.verified:
                i -= 1
                continue
            moved = self._verify_level(i)
            if moved is None:
                lvl.verified = True
                i -= 1
            else:
                i = moved
        n = 1
        for lvl in self._levels:
            n *= len(lvl.orbit_order)
        self._order = n

    def order(self) -> int:
        self._ensure_chain()
        return self._order

    def base(self) -> list[int]:
        self._ensure_chain()
        return [lvl.point for lvl in self._levels]

    def contains(self, p: Perm) -> bool:
        if len(p) != self.degree:
            return False
        self._ensure_chain()
        residue, _ = self._sift_from(tuple(p), 0)
        return residue == self.identity

    def __contains__(self, p: Perm) -> bool:
        return self.contains(p)

    def canonical_coset_rep(self, u: Perm) -> Perm:
        """Canonical representative of the right coset (self)*u, found by
        minimizing base images level by level. Depends only on the coset."""
        self._ensure_chain()
        for lvl in self._levels:
            x = min(lvl.orbit_order, key=u.__getitem__)
            if x != lvl.point:
                u = perm_mul(lvl.orbit[x], u)
        return u

    # -- element enumeration

    def elements(self, limit: int = ELEMENT_LIMIT) -> list[Perm]:
        if self._elements is None:
            n = self.order()
            if n > limit:
                raise SizeLimitError(
                    f"element enumeration needs order {n} > limit {limit}")
            out = [self.identity]
            index = {self.identity}
            qi = 0
            while qi < len(out):
                e = out[qi]
                qi += 1
                for g in self.generators:
                    f = perm_mul(e, g)
                    if f not in index:
                        index.add(f)
                        out.append(f)
            self._elements = out
        return self._elements

    def elements_with_words(self, limit: int = ELEMENT_LIMIT) -> dict[Perm, Word]:
        """Breadth-first words for every element, over this group's own
        generator list (generator i in ascending order, inverse after)."""
        if self._element_words is None:
            n = self.order()
            if n > limit:
                raise SizeLimitError(
                    f"element enumeration needs order {n} > limit {limit}")
            self._element_words = element_words_over(
                self.generators, self.degree, limit)
        return self._element_words

    # -- subgroup machinery

    def subgroup(self, elements: Iterable[Perm]) -> "PermGroup":
        elts = [tuple(e) for e in elements]
        for e in elts:
            if not self.contains(e):
                raise ValueError(f"element {cycles_text(e)} is not in the group")
        return PermGroup(elts, self.degree)

    def normal_closure(self, seeds: Iterable[Perm]) -> "PermGroup":
        seeds = [tuple(s) for s in seeds]
        for s in seeds:
            if not self.contains(s):
                raise ValueError(f"seed {cycles_text(s)} is not in the group")
        gens: list[Perm] = []
        closure: PermGroup | None = None
        queue = list(seeds)
        qi = 0
        while qi < len(queue):
            s = queue[qi]
            qi += 1
            if s == self.identity:
                continue
            if closure is not None and closure.contains(s):
                continue
            gens.append(s)
            closure = PermGroup(gens, self.degree)
            for g in self.generators:
                queue.append(perm_conjugate(s, g))
        return closure if closure is not None else PermGroup([], self.degree)

    def derived_subgroup(self) -> "PermGroup":
        seeds = []
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                seeds.append(perm_commutator(gens[i], gens[j]))
        return self.normal_closure(seeds)

    def is_abelian(self) -> bool:
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if perm_mul(gens[i], gens[j]) != perm_mul(gens[j], gens[i]):
                    return False
        return True

    def center(self) -> "PermGroup":
        n = self.order()
        if n > CENTER_LIMIT:
            raise SizeLimitError(f"center scan needs order {n} > limit {CENTER_LIMIT}")
        central = [e for e in self.elements()
                   if all(perm_mul(e, g) == perm_mul(g, e) for g in self.generators)]
        return PermGroup(central, self.degree)

    def exponent(self, limit: int = ELEMENT_LIMIT) -> int:
        out = 1
        for e in self.elements(limit):
            out = lcm(out, perm_order(e))
        return out

    def lower_central_series(self) -> list["PermGroup"]:
        """G = gamma_1, gamma_{k+1} = [gamma_k, G], computed until the terms
        repeat; a repeated nontrivial term is kept as the stabilization
        witness."""
        series = [self]
        while True:
            cur = series[-1]
            seeds = [perm_commutator(a, g)
                     for a in cur.generators for g in self.generators]
            nxt = self.normal_closure(seeds)
            series.append(nxt)
            if nxt.order() == 1 or nxt.order() == cur.order():
                return series

    def upper_central_series(self) -> list["PermGroup"]:
        """1 = Z_0, Z_{i+1} = {g : [g, G] inside Z_i}, computed until the
        whole group or a repeat appears."""
        series = [PermGroup([], self.degree)]
        n = self.order()
        if n > CENTER_LIMIT:
            raise SizeLimitError(f"central series scan needs order {n} > "
                                 f"limit {CENTER_LIMIT}")
        elements = self.elements()
        while True:
            prev = series[-1]
            nxt_elems = [e for e in elements
                         if all(perm_commutator(e, g) in prev
                                for g in self.generators)]
            nxt = PermGroup(nxt_elems, self.degree)
            series.append(nxt)
            if nxt.order() == n or nxt.order() == prev.order():
                return series

    def quotient(self, n: "PermGroup") -> tuple["PermGroup", "GroupHom"]:
        """Permutation action of the group on the right cosets of a normal
        subgroup, with the quotient homomorphism (a hom by construction)."""
        if n.degree != self.degree:
            raise ValueError("subgroup degree mismatch")
        for s in n.generators:
            if not self.contains(s):
                raise ValueError("quotient by a non-subgroup")
            for g in self.generators:
                if not n.contains(perm_conjugate(s, g)):
                    raise ValueError("quotient by a non-normal subgroup")
        start = n.canonical_coset_rep(self.identity)
        index_of = {start: 0}
        reps = [start]
        images: list[list[int]] = [[] for _ in self.generators]
        qi = 0
        while qi < len(reps):
            r = reps[qi]
            qi += 1
            for gi, g in enumerate(self.generators):
                t = n.canonical_coset_rep(perm_mul(r, g))
                k = index_of.get(t)
                if k is None:
                    k = len(reps)
                    index_of[t] = k
                    reps.append(t)
                images[gi].append(k)
        count = len(reps)
        if n.order() * count != self.order():
            raise RuntimeError("coset count does not match the index")
        qgens = [tuple(col) for col in images]
        quot = PermGroup(qgens, count)
        hom = GroupHom(self, self.generators, qgens, count, presentation=None)
        return quot, hom


def trivial_group(degree: int) -> PermGroup:
    return PermGroup([], degree)


class GroupHom:
    """Homomorphism given by images of an explicit source generator list.
    Instances are verified at construction: either each presentation
    relator maps to the identity, or the map arose from a group action and
    is a homomorphism mechanically."""

    def __init__(self, source: PermGroup, source_gens: Sequence[Perm],
                 images: Sequence[Perm], target_degree: int,
                 presentation: Presentation | None):
        if len(images) != len(source_gens):
            raise ValueError("one image per source generator is required")
        self.source = source
        self.source_gens = [tuple(p) for p in source_gens]
        self.images = [tuple(p) for p in images]
        for p in self.images:
            if len(p) != target_degree:
                raise ValueError("image degree mismatch")
        self.target_degree = target_degree
        self.presentation = presentation
        self.verified = True
        self._words: dict[Perm, Word] | None = None

    def image(self) -> PermGroup:
        return PermGroup(self.images, self.target_degree)

    def apply_word(self, word: Word) -> Perm:
        return word_eval(word, self.images, self.target_degree)

    def apply(self, p: Perm) -> Perm:
        """Image of one source element, via its word in the hom's own
        generator list; only for sources small enough to enumerate."""
        if self._words is None:
            self._words = element_words_over(self.source_gens,
                                             self.source.degree)
        word = self._words.get(tuple(p))
        if word is None:
            raise ValueError("element is not in the source group")
        return self.apply_word(word)

    def kernel(self) -> PermGroup:
        """Pointwise stabilizer of the target points inside the graph of
        the hom, acting on source points; base change does the work."""
        d_s = self.source.degree
        d_t = self.target_degree
        pair_gens = [g + tuple(v + d_s for v in img)
                     for g, img in zip(self.source_gens, self.images)]
        moved = tuple(d_s + j for j in range(d_t)
                      if any(img[j] != j for img in self.images))
        graph = PermGroup(pair_gens, d_s + d_t, prescribed_base=moved)
        graph._ensure_chain()
        m = 0
        levels = graph._levels
        while m < len(levels) and levels[m].point >= d_s:
            m += 1
        kgens = [g[:d_s] for g in levels[m].gens] if m < len(levels) else []
        ker = PermGroup(kgens, d_s)
        if ker.order() * self.image().order() != self.source.order():
            raise RuntimeError("kernel and image orders do not multiply up")
        return ker


def define_hom(source_pres: Presentation, source: PermGroup,
               images: Sequence[Perm],
               source_gens: Sequence[Perm] | None = None) -> GroupHom:
    """Hom out of a presented group, checked on every relator; raises when
    the images do not satisfy a relator."""
    if len(images) != source_pres.ngens:
        raise ValueError("one image per presentation generator is required")
    if source_gens is None:
        source_gens = source.generators
    if len(source_gens) != source_pres.ngens:
        raise ValueError("source group does not match the presentation")
    images = [tuple(p) for p in images]
    degree = len(images[0]) if images else 1
    ident = identity_perm(degree)
    for rel in source_pres.relators:
        if word_eval(rel, images, degree) != ident:
            raise ValueError(
                f"relator {rel.text(source_pres.generators)} maps to a "
                f"nonidentity permutation")
    return GroupHom(source, source_gens, images, degree,
                    presentation=source_pres)


class PresentedGroup:
    """A finite presentation together with a permutation realization whose
    i-th listed generator image realizes the i-th presentation generator
    (identity images allowed, unlike PermGroup's deduplicated list)."""

    def __init__(self, presentation: Presentation, gen_perms: Sequence[Perm],
                 degree: int | None = None, name: str | None = None):
        gen_perms = [tuple(p) for p in gen_perms]
        if len(gen_perms) != presentation.ngens:
            raise ValueError("one permutation per presentation generator")
        if degree is None:
            if not gen_perms:
                raise ValueError("degree required for a generator-free group")
            degree = len(gen_perms[0])
        ident = identity_perm(degree)
        for rel in presentation.relators:
            if word_eval(rel, gen_perms, degree) != ident:
                raise ValueError(
                    f"relator {rel.text(presentation.generators)} fails in "
                    f"the permutation realization")
        self.presentation = presentation
        self.gen_perms = gen_perms
        self.group = PermGroup(gen_perms, degree)
        self.name = name
        self._words: dict[Perm, Word] | None = None

    @property
    def degree(self) -> int:
        return self.group.degree

    def order(self) -> int:
        return self.group.order()

    def __repr__(self) -> str:
        tag = self.name or self.presentation.display()
        return f"PresentedGroup({tag}, order={self.order()})"

    def element_words(self, limit: int = ELEMENT_LIMIT) -> dict[Perm, Word]:
        """One word per element, letters aligned with the presentation's
        generator numbering."""
        if self._words is None:
            n = self.order()
            if n > limit:
                raise SizeLimitError(
                    f"element enumeration needs order {n} > limit {limit}")
            self._words = element_words_over(self.gen_perms, self.degree, limit)
        return self._words

    def eval_word(self, word: Word) -> Perm:
        return word_eval(word, self.gen_perms, self.degree)


def realize(pres: Presentation, name: str | None = None,
            limits: EnumLimits | None = None,
            strategy: str = "hlt") -> PresentedGroup:
    """Enumerate a presentation into its regular permutation realization."""
    table = enumerate_cosets(pres, [], limits, strategy)
    return PresentedGroup(pres, table.permutations(), table.coset_count, name)


def reduced_generators(g: PermGroup) -> list[Perm]:
    """Greedy irredundant generating sublist: keep a generator only when it
    grows the subgroup built so far."""
    kept: list[Perm] = []
    sub: PermGroup | None = None
    for gen in g.generators:
        if sub is None or not sub.contains(gen):
            kept.append(gen)
            sub = PermGroup(kept, g.degree)
    if (sub.order() if sub else 1) != g.order():
        raise RuntimeError("generator reduction lost the group")
    return kept


DEFAULT_TRIM_BUDGET = 50_000_000


def cayley_presentation(g: PermGroup, prefix: str = "x",
                        name: str | None = None) -> PresentedGroup:
    """Present a finite permutation group on an irredundant generating
    sublist, using Schreier-tree relators of the regular action trimmed to
    a subset that coset enumeration certifies is already sufficient."""
    gens = reduced_generators(g)
    names = tuple(f"{prefix}{i}" for i in range(len(gens)))
    if not gens:
        return PresentedGroup(Presentation((), ()), [], g.degree, name)
    order = g.order()
    words = element_words_over(gens, g.degree)
    relators: list[Word] = []
    seen: set[Word] = set()
    for e, we in words.items():
        for i, s in enumerate(gens):
            rel = cyclic_reduce(we * gen_word(i) * words[perm_mul(e, s)].inverse())
            if not rel.is_identity and rel not in seen:
                seen.add(rel)
                relators.append(rel)
    relators.sort(key=Word.length)
    limits = EnumLimits(max_cosets=max(4 * order + 64, 256),
                        scan_budget=DEFAULT_TRIM_BUDGET)
    k = min(max(2 * len(gens), 8), len(relators))
    while True:
        pres = Presentation(names, tuple(relators[:k]))
        try:
            if enumerate_cosets(pres, [], limits).coset_count == order:
                return PresentedGroup(pres, gens, g.degree, name)
        except LimitExceeded:
            pass
        if k == len(relators):
            raise RuntimeError(
                "full Schreier relator set failed to present the group")
        k = min(2 * k, len(relators))


def abelian_invariants(g: PermGroup) -> AbelianGroup:
    """Invariant factors of g/[g,g], from subgroup orders of power maps:
    in a finite abelian group A, |A^(p^k)| ratios count the cyclic factors
    of each p-power exponent."""
    derived = g.derived_subgroup()
    if derived.order() > 1:
        a, _ = g.quotient(derived)
    else:
        a = g
    total = a.order()
    if total == 1:
        return AbelianGroup()
    parts: list[int] = []
    for p in sorted(_factorize(total)):
        counts = []
        prev = a
        while True:
            step = [perm_pow(x, p) for x in prev.generators]
            sub = PermGroup(step, a.degree)
            ratio = prev.order() // sub.order()
            if ratio == 1:
                break
            e = 0
            while ratio > 1:
                if ratio % p:
                    raise RuntimeError("power subgroup index is not a p-power")
                ratio //= p
                e += 1
            counts.append(e)
            prev = sub
        for j, c in enumerate(counts):
            nxt = counts[j + 1] if j + 1 < len(counts) else 0
            parts.extend([p ** (j + 1)] * (c - nxt))
    result = AbelianGroup.from_cyclic_orders(parts)
    if result.order() != total:
        raise RuntimeError("abelian invariants do not multiply to the order")
    return result
