"""Finite group presentations: words over formal generators, a small text
grammar for writing them, and Schreier word tables for enumerated groups.

A word is stored as a tuple of (generator index, exponent) syllables with
free reduction applied on construction, so adjacent syllables never share a
generator and no exponent is zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class ParseError(ValueError):
    """Raised on malformed presentation text; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def free_reduce(syllables: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Merge adjacent syllables of the same generator and drop zero powers."""
    out: list[list[int]] = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


class Word:
    """Freely reduced word in the generators of a presentation."""

    __slots__ = ("syllables",)

    def __init__(self, syllables: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "syllables", free_reduce(syllables))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return hash(self.syllables)

    def __repr__(self) -> str:
        return f"Word({list(self.syllables)})"

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word([(g, -e) for g, e in reversed(self.syllables)])

    def conjugate(self, by: "Word") -> "Word":
        """Right conjugate: by^-1 * self * by."""
        return by.inverse() * self * by

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        w = Word()
        for _ in range(n):
            w = w * self
        return w

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def length(self) -> int:
        """Letter count after free reduction."""
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> list[int]:
        """Flatten to letter indices: generator i gives 2i, its inverse 2i+1."""
        out: list[int] = []
        for g, e in self.syllables:
            letter = 2 * g if e > 0 else 2 * g + 1
            out.extend([letter] * abs(e))
        return out

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)

    def shifted(self, offset: int) -> "Word":
        """Same word over generators renumbered by a fixed offset."""
        return Word([(g + offset, e) for g, e in self.syllables])

    def text(self, names: tuple[str, ...]) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts)


def commutator(u: Word, v: Word) -> Word:
    return u.inverse() * v.inverse() * u * v


def gen_word(i: int, exp: int = 1) -> Word:
    return Word([(i, exp)])


def cyclic_reduce(word: Word) -> Word:
    """Strip matching prefix/suffix inverses; used for relator preprocessing."""
    syl = list(word.syllables)
    while len(syl) >= 2 and syl[0][0] == syl[-1][0] and syl[0][1] == -syl[-1][1]:
        syl = syl[1:-1]
    # partial cancellation on the boundary syllable pair
    if len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        g, e0 = syl[0]
        _, e1 = syl[-1]
        if (e0 > 0) != (e1 > 0):
            k = min(abs(e0), abs(e1))
            syl[0] = (g, e0 + k if e0 < 0 else e0 - k)
            syl[-1] = (g, e1 + k if e1 < 0 else e1 - k)
            syl = [s for s in syl if s[1] != 0]
    return Word(syl)


@dataclass(frozen=True)
class Presentation:
    """Generator names plus relator words; identity relators are dropped."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        seen = set()
        for name in self.generators:
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)
        for r in self.relators:
            if r.max_generator() >= len(self.generators):
                raise ValueError("relator references an unknown generator")
        object.__setattr__(
            self, "relators", tuple(r for r in self.relators if not r.is_identity)
        )

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def display(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(r.text(self.generators) for r in self.relators)
        return f"<{gens} | {rels}>"

    def __str__(self) -> str:
        return self.display()


# ---------------------------------------------------------------------------
# Parsing


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {char!r}, found {found!r}", self.pos)
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or self.text[self.pos] not in _IDENT_START:
            raise ParseError("expected a generator name", self.pos)
        while self.pos < len(self.text) and self.text[self.pos] in _IDENT_CONT:
            self.pos += 1
        return self.text[start : self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise ParseError("expected an integer exponent", self.pos)
        value = int(self.text[start : self.pos])
        if value == 0:
            raise ParseError("zero exponent is not allowed", start)
        return value


class _WordParser:
    """Word grammar: juxtaposition or '*', x' and x^k inverses and powers,
    parenthesised subwords, and [u, v, ...] left-normed commutators."""

    def __init__(self, scanner: _Scanner, index: dict[str, int]):
        self.s = scanner
        self.index = index

    def word(self) -> Word:
        w = self.term()
        while True:
            c = self.s.peek()
            if c == "*":
                self.s.take()
                w = w * self.term()
            elif c and (c in _IDENT_START or c in "([" or c == "1"):
                w = w * self.term()
            else:
                return w

    def term(self) -> Word:
        atom = self.atom()
        while True:
            c = self.s.peek()
            if c == "'":
                self.s.take()
                atom = atom.inverse()
            elif c == "^":
                self.s.take()
                atom = atom ** self.s.integer()
            else:
                return atom

    def atom(self) -> Word:
        c = self.s.peek()
        if c == "1":
            # the identity, as Word.text renders it
            self.s.take()
            return Word()
        if c == "(":
            self.s.take()
            w = self.word()
            self.s.expect(")")
            return w
        if c == "[":
            self.s.take()
            parts = [self.word()]
            while self.s.peek() == ",":
                self.s.take()
                parts.append(self.word())
            self.s.expect("]")
            if len(parts) < 2:
                raise ParseError("commutator needs at least two arguments", self.s.pos)
            w = parts[0]
            for v in parts[1:]:
                w = commutator(w, v)
            return w
        start = self.s.pos
        name = self.s.ident()
        if name not in self.index:
            raise ParseError(f"unknown generator {name!r}", start)
        return gen_word(self.index[name])


def parse_word(text: str, names: tuple[str, ...]) -> Word:
    scanner = _Scanner(text)
    index = {n: i for i, n in enumerate(names)}
    w = _WordParser(scanner, index).word()
    scanner.skip_ws()
    if scanner.pos != len(scanner.text):
        raise ParseError("trailing input after word", scanner.pos)
    return w


def parse_presentation(text: str) -> Presentation:
    scanner = _Scanner(text)
    scanner.expect("<")
    names: list[str] = []
    if scanner.peek() != "|":
        names.append(scanner.ident())
        while scanner.peek() == ",":
            scanner.take()
            names.append(scanner.ident())
    scanner.expect("|")
    index = {n: i for i, n in enumerate(names)}
    parser = _WordParser(scanner, index)
    relators: list[Word] = []
    if scanner.peek() != ">":
        relators.append(parser.word())
        while scanner.peek() == ",":
            scanner.take()
            relators.append(parser.word())
    scanner.expect(">")
    scanner.skip_ws()
    if scanner.pos != len(scanner.text):
        raise ParseError("trailing input after presentation", scanner.pos)
    return Presentation(tuple(names), tuple(relators))


def load_corpus_file(text: str) -> dict[str, Presentation]:
    """Corpus files: one `name = <...>` binding per line, `#` comments."""
    out: dict[str, Presentation] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            if "=" not in stripped:
                raise ParseError("expected `name = <presentation>`", offset)
            name, _, body = stripped.partition("=")
            name = name.strip()
            if not name or any(c not in _IDENT_CONT for c in name):
                raise ParseError(f"bad corpus entry name {name!r}", offset)
            if name in out:
                raise ParseError(f"duplicate corpus entry {name!r}", offset)
            out[name] = parse_presentation(body.strip())
        offset += len(line)
    return out


# ---------------------------------------------------------------------------
# Word tables


def element_word_table(pres: Presentation, table) -> list[Word]:
    """One Schreier word per coset of a completed coset table, found by
    breadth-first search over the table from coset 0 with generators tried
    in index order."""
    n = table.coset_count
    words: list[Word | None] = [None] * n
    words[0] = Word()
    queue = [0]
    while queue:
        nxt: list[int] = []
        for coset in queue:
            for gen in range(pres.ngens):
                for exp in (1, -1):
                    target = table.follow(coset, gen, exp)
                    if words[target] is None:
                        words[target] = words[coset] * gen_word(gen, exp)
                        nxt.append(target)
        queue = nxt
    missing = [i for i, w in enumerate(words) if w is None]
    if missing:
        raise ValueError(f"coset table is not connected: cosets {missing[:4]} unreachable")
    return words  # type: ignore[return-value]
