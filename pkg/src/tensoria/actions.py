"""Mutual actions of two finite groups by automorphisms.

An action pair stores, for each generator of one group, an automorphism of
the other group as a generator-image map, and materializes element-indexed
action tables so that the compatibility identities

    g^(h^g1) = ((g^(g1^-1))^h)^g1        h^(g^h1) = ((h^(h1^-1))^g)^h1

can be swept exhaustively.  Right-action convention throughout: g^x means
x^-1 g x when x acts by conjugation, and composite actions satisfy
g^(x y) = (g^x)^y.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import SizeLimitError
from .permgrp import (Perm, PermGroup, PresentedGroup, identity_perm,
                      perm_conjugate, perm_inverse, perm_mul, word_eval)
from .presentation import Presentation, Word, parse_word

ACTION_TABLE_LIMIT = 10_000
DEFAULT_COMPAT_BUDGET = 10_000_000


class _Side:
    """Element indexing for one group of a pair: breadth-first element
    list with parent edges, inverse table, and on-demand words."""

    __slots__ = ("pg", "elements", "index", "parents", "inv")

    def __init__(self, pg: PresentedGroup):
        n = pg.order()
        if n > ACTION_TABLE_LIMIT:
            raise SizeLimitError(
                f"action tables need group order {n} <= {ACTION_TABLE_LIMIT}")
        ident = identity_perm(pg.degree)
        steps: list[tuple[Perm, int]] = []
        for k, p in enumerate(pg.gen_perms):
            if p != ident:
                steps.append((p, 2 * k))
                steps.append((perm_inverse(p), 2 * k + 1))
        elements = [ident]
        index = {ident: 0}
        parents: list[tuple[int, int]] = [(-1, -1)]
        qi = 0
        while qi < len(elements):
            e = elements[qi]
            for p, letter in steps:
                f = perm_mul(e, p)
                if f not in index:
                    index[f] = len(elements)
                    elements.append(f)
                    parents.append((qi, letter))
            qi += 1
        self.pg = pg
        self.elements = elements
        self.index = index
        self.parents = parents
        self.inv = [index[perm_inverse(e)] for e in elements]

    def __len__(self) -> int:
        return len(self.elements)

    def word(self, i: int) -> Word:
        """Breadth-first word for element i over the side's own generators."""
        letters: list[tuple[int, int]] = []
        while i != 0:
            parent, letter = self.parents[i]
            letters.append((letter // 2, 1 if letter % 2 == 0 else -1))
            i = parent
        return Word(reversed(letters))

    def word_text(self, i: int) -> str:
        return self.word(i).text(self.pg.presentation.generators)


def _letter_tables(acting: PresentedGroup, target: _Side,
                   gen_autos: Sequence[Sequence[Perm]],
                   label: str) -> list[list[int]]:
    """Element-level table per acting letter (2k for generator k, 2k+1 for
    its inverse), mapping target element indices to image indices.

    Each automorphism's table is filled along the target's breadth-first
    parent edges, which is valid once the generator-image map is known to
    be an endomorphism."""
    nt = len(target)
    ident = identity_perm(target.pg.degree)
    tables: list[list[int]] = []
    for k in range(acting.presentation.ngens):
        images = gen_autos[k]
        step_imgs: dict[int, Perm] = {}
        for t, q in enumerate(images):
            step_imgs[2 * t] = q
            step_imgs[2 * t + 1] = perm_inverse(q)
        img_perms: list[Perm] = [ident] * nt
        for i in range(1, nt):
            parent, letter = target.parents[i]
            img_perms[i] = perm_mul(img_perms[parent], step_imgs[letter])
        table = [target.index[p] for p in img_perms]
        inv_table = [0] * nt
        for i, j in enumerate(table):
            inv_table[j] = i
        tables.append(table)
        tables.append(inv_table)
    # the assignment must respect the acting group's relators, so that it
    # defines a homomorphism into Aut(target)
    gen_tables = [tuple(tables[2 * k]) for k in
                  range(acting.presentation.ngens)]
    id_table = identity_perm(nt)
    for rel in acting.presentation.relators:
        if word_eval(rel, gen_tables, nt) != id_table:
            raise ValueError(
                f"{label}: relator "
                f"{rel.text(acting.presentation.generators)} of the acting "
                f"group does not act trivially")
    return tables


def _element_rows(acting: _Side, letter_tables: list[list[int]],
                  n_target: int) -> list[list[int]]:
    """One table per acting element, composed along breadth-first parent
    edges: the action of e*s applies e's table then s's."""
    rows: list[list[int]] = [list(range(n_target))]
    for i in range(1, len(acting)):
        parent, letter = acting.parents[i]
        step = letter_tables[letter]
        rows.append([step[x] for x in rows[parent]])
    return rows


def _conj_rows(side: _Side) -> list[list[int]]:
    """Conjugation tables of a group on itself: row k maps i to the index
    of k^-1 * i * k, one row per element, composed along parent edges."""
    n = len(side)
    letter_rows: dict[int, list[int]] = {}
    for letter in {letter for _, letter in side.parents[1:]}:
        k = letter // 2
        q = side.pg.gen_perms[k]
        if letter % 2:
            q = perm_inverse(q)
        letter_rows[letter] = [side.index[perm_conjugate(e, q)]
                               for e in side.elements]
    rows: list[list[int]] = [list(range(n))]
    for i in range(1, n):
        parent, letter = side.parents[i]
        step = letter_rows[letter]
        rows.append([step[x] for x in rows[parent]])
    return rows


@dataclass(frozen=True)
class CompatWitness:
    """First failing triple of a compatibility sweep, as element words.
    The triple is listed in the order the identity names its variables."""
    identity: str
    triple: tuple[str, str, str]

    def to_json(self) -> dict:
        return {"identity": self.identity, "triple": list(self.triple)}


@dataclass(frozen=True)
class CompatReport:
    ok: bool
    triples_checked: int
    witness: CompatWitness | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "triples_checked": self.triples_checked,
                "witness": self.witness.to_json() if self.witness else None}


class ActionPair:
    """Two presented permutation groups acting on each other by
    automorphisms given per acting generator.

    Construction validates each assignment: every image lies in the target
    group, target relators map to the identity (so the map extends to an
    endomorphism), the image generates the whole target (bijectivity), and
    the acting group's relators act trivially at the element-table level.
    Compatibility is a separate exhaustive check."""

    def __init__(self, g: PresentedGroup, h: PresentedGroup,
                 h_on_g: Sequence[Sequence[Perm]],
                 g_on_h: Sequence[Sequence[Perm]]):
        self.g = g
        self.h = h
        self.h_on_g = [[tuple(p) for p in images] for images in h_on_g]
        self.g_on_h = [[tuple(p) for p in images] for images in g_on_h]
        _validate_autos(h, g, self.h_on_g, "h_on_g")
        _validate_autos(g, h, self.g_on_h, "g_on_h")
        self._g_side = _Side(g)
        self._h_side = self._g_side if h is g else _Side(h)
        self._letters_from_h = _letter_tables(h, self._g_side,
                                              self.h_on_g, "h_on_g")
        self._letters_from_g = _letter_tables(g, self._h_side,
                                              self.g_on_h, "g_on_h")
        self._rows_h_on_g: list[list[int]] | None = None
        self._rows_g_on_h: list[list[int]] | None = None
        self._conj_g: list[list[int]] | None = None
        self._conj_h: list[list[int]] | None = None

    @property
    def g_order(self) -> int:
        return len(self._g_side)

    @property
    def h_order(self) -> int:
        return len(self._h_side)

    @property
    def g_side(self) -> _Side:
        return self._g_side

    @property
    def h_side(self) -> _Side:
        return self._h_side

    def letter_table(self, acting: str, letter: int) -> list[int]:
        """Element-index table of one acting letter (2k generator k, 2k+1
        its inverse) on the other group's elements."""
        if acting == "h":
            return self._letters_from_h[letter]
        if acting == "g":
            return self._letters_from_g[letter]
        raise ValueError("acting must be 'h' or 'g'")

    def rows_h_on_g(self) -> list[list[int]]:
        """Per h-element tables over g's element indices."""
        if self._rows_h_on_g is None:
            self._rows_h_on_g = _element_rows(self._h_side,
                                              self._letters_from_h,
                                              len(self._g_side))
        return self._rows_h_on_g

    def rows_g_on_h(self) -> list[list[int]]:
        if self._rows_g_on_h is None:
            self._rows_g_on_h = _element_rows(self._g_side,
                                              self._letters_from_g,
                                              len(self._h_side))
        return self._rows_g_on_h

    def conj_g(self) -> list[list[int]]:
        if self._conj_g is None:
            self._conj_g = _conj_rows(self._g_side)
        return self._conj_g

    def conj_h(self) -> list[list[int]]:
        if self._conj_h is None:
            if self.h is self.g:
                self._conj_h = self.conj_g()
            else:
                self._conj_h = _conj_rows(self._h_side)
        return self._conj_h

    def image_word(self, acting: str, letter: int, gen: int) -> Word:
        """Word (over the target's generators) of the image of the target's
        generator `gen` under acting letter `letter` (2k for acting
        generator k, 2k+1 for its inverse).  `acting` is "h" for the action
        of h on g and "g" for the action of g on h."""
        if acting == "h":
            tables, side = self._letters_from_h, self._g_side
        elif acting == "g":
            tables, side = self._letters_from_g, self._h_side
        else:
            raise ValueError("acting must be 'h' or 'g'")
        gi = side.index[side.pg.gen_perms[gen]]
        return side.word(tables[letter][gi])

    def swapped(self) -> "ActionPair":
        return ActionPair(self.h, self.g, self.g_on_h, self.h_on_g)

    def __repr__(self) -> str:
        return (f"ActionPair(|g|={self.g_order}, |h|={self.h_order})")


def _validate_autos(acting: PresentedGroup, target: PresentedGroup,
                    autos: Sequence[Sequence[Perm]], label: str) -> None:
    if len(autos) != acting.presentation.ngens:
        raise ValueError(f"{label}: one automorphism per acting generator")
    order = target.order()
    for k, images in enumerate(autos):
        if len(images) != target.presentation.ngens:
            raise ValueError(
                f"{label}[{k}]: one image per target generator")
        for q in images:
            if len(q) != target.degree:
                raise ValueError(f"{label}[{k}]: degree mismatch")
            if not target.group.contains(q):
                raise ValueError(
                    f"{label}[{k}]: image outside the target group")
        for rel in target.presentation.relators:
            if word_eval(rel, list(images), target.degree) != \
                    identity_perm(target.degree):
                raise ValueError(
                    f"{label}[{k}]: target relator "
                    f"{rel.text(target.presentation.generators)} broken, "
                    f"not an endomorphism")
        live = [q for q in images if q != identity_perm(target.degree)]
        if PermGroup(live, target.degree).order() != order:
            raise ValueError(f"{label}[{k}]: image subgroup is proper, "
                             f"not an automorphism")


AUTO_SEARCH_LIMIT = 512


def automorphism_images(pg: PresentedGroup,
                        limit: int = AUTO_SEARCH_LIMIT) -> list[list[Perm]]:
    """All automorphisms of a small group, each as the tuple of images of
    the presentation's generators, found by brute force over element
    tuples that satisfy the relators and generate the whole group."""
    n = pg.order()
    ngens = pg.presentation.ngens
    if n > limit or n ** ngens > 1_000_000:
        raise SizeLimitError(
            f"automorphism search over {n}^{ngens} tuples is too large")
    elts = pg.group.elements()
    order = pg.order()
    found: list[list[Perm]] = []

    def extend(images: list[Perm]) -> None:
        if len(images) == ngens:
            for rel in pg.presentation.relators:
                if word_eval(rel, images, pg.degree) != \
                        identity_perm(pg.degree):
                    return
            live = [q for q in images if q != identity_perm(pg.degree)]
            if PermGroup(live, pg.degree).order() == order:
                found.append(list(images))
            return
        for e in elts:
            images.append(e)
            extend(images)
            images.pop()

    extend([])
    return found


def conjugation_pair(g: PresentedGroup) -> ActionPair:
    """G acting on itself on both sides of the pair, by conjugation."""
    autos = [[perm_conjugate(x, q) for x in g.gen_perms]
             for q in g.gen_perms]
    return ActionPair(g, g, autos, autos)


def subgroup_conjugation_pair(g: PresentedGroup, n: PermGroup,
                              name: str | None = None) -> ActionPair:
    """Pair (g, n) for a normal subgroup n, both actions by conjugation
    inside g.  n is re-presented on an irredundant generating set."""
    from .permgrp import cayley_presentation
    for q in g.gen_perms:
        for y in n.generators:
            if not n.contains(perm_conjugate(y, q)):
                raise ValueError("n not normal in g")
    npres = cayley_presentation(n, name=name)
    h_on_g = [[perm_conjugate(x, q) for x in g.gen_perms]
              for q in npres.gen_perms]
    g_on_h = [[perm_conjugate(y, q) for y in npres.gen_perms]
              for q in g.gen_perms]
    return ActionPair(g, npres, h_on_g, g_on_h)


def check_compatibility(pair: ActionPair,
                        budget: int = DEFAULT_COMPAT_BUDGET) -> CompatReport:
    """Exhaustive sweep of both compatibility identities over all triples.

    Raises SizeLimitError when |g|*|h|*(|g|+|h|) exceeds the budget."""
    ng, nh = pair.g_order, pair.h_order
    required = ng * nh * (ng + nh)
    if required > budget:
        raise SizeLimitError(
            f"compatibility sweep needs {required} triple evaluations, "
            f"budget is {budget}")
    rows_hg = pair.rows_h_on_g()
    rows_gh = pair.rows_g_on_h()
    conj_g = pair.conj_g()
    conj_h = pair.conj_h()
    inv_g = pair._g_side.inv
    inv_h = pair._h_side.inv
    checked = 0
    # g^(h^g1) = ((g^(g1^-1))^h)^g1 over (g, h, g1)
    for i1 in range(ng):
        pre = conj_g[inv_g[i1]]
        post = conj_g[i1]
        acted = rows_gh[i1]
        for j in range(nh):
            lhs = rows_hg[acted[j]]
            mid = rows_hg[j]
            rhs = [post[mid[x]] for x in pre]
            if lhs != rhs:
                i = next(k for k in range(ng) if lhs[k] != rhs[k])
                w = CompatWitness(
                    "g^(h^g1) = ((g^(g1^-1))^h)^g1",
                    (pair._g_side.word_text(i), pair._h_side.word_text(j),
                     pair._g_side.word_text(i1)))
                return CompatReport(False, checked + i + 1, w)
            checked += ng
    # h^(g^h1) = ((h^(h1^-1))^g)^h1 over (h, g, h1)
    for j1 in range(nh):
        pre = conj_h[inv_h[j1]]
        post = conj_h[j1]
        acted = rows_hg[j1]
        for i in range(ng):
            lhs = rows_gh[acted[i]]
            mid = rows_gh[i]
            rhs = [post[mid[x]] for x in pre]
            if lhs != rhs:
                j = next(k for k in range(nh) if lhs[k] != rhs[k])
                w = CompatWitness(
                    "h^(g^h1) = ((h^(h1^-1))^g)^h1",
                    (pair._h_side.word_text(j), pair._g_side.word_text(i),
                     pair._h_side.word_text(j1)))
                return CompatReport(False, checked + j + 1, w)
            checked += nh
    return CompatReport(True, checked, None)


def load_action_json(data: str | dict, acting: Presentation,
                     target: Presentation) -> list[list[Word]]:
    """Parse an action description: a JSON object mapping each acting
    generator name to the list of images of the target's generators, as
    words over the target's generator names."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise ValueError("action description must be a JSON object")
    if set(data) != set(acting.generators):
        raise ValueError(
            f"action keys {sorted(data)} do not match acting generators "
            f"{list(acting.generators)}")
    out: list[list[Word]] = []
    for name in acting.generators:
        images = data[name]
        if not isinstance(images, list) or len(images) != len(target.generators):
            raise ValueError(
                f"action for {name!r} must list one image per target "
                f"generator")
        out.append([parse_word(s, target.generators) for s in images])
    return out


def pair_from_words(g: PresentedGroup, h: PresentedGroup,
                    h_on_g: Sequence[Sequence[Word]],
                    g_on_h: Sequence[Sequence[Word]]) -> ActionPair:
    """Build a pair from word-level action descriptions: images of g's
    generators as words over g's generators (per h-generator), and
    symmetrically."""
    hg = [[g.eval_word(w) for w in images] for images in h_on_g]
    gh = [[h.eval_word(w) for w in images] for images in g_on_h]
    return ActionPair(g, h, hg, gh)
