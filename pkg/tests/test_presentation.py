"""Parser and free-word algebra."""

import pytest
from hypothesis import given, strategies as st

from tensoria.coset_enum import enumerate_cosets
from tensoria.presentation import (
    ParseError,
    Presentation,
    Word,
    commutator,
    cyclic_reduce,
    element_word_table,
    free_reduce,
    gen_word,
    parse_presentation,
    parse_word,
)

GENS = ("a", "b", "c")


def test_parse_simple():
    p = parse_presentation("< a, b | a^2, b^3, [a, b] >")
    assert p.generators == ("a", "b")
    assert len(p.relators) == 3


def test_parse_whitespace_insensitive():
    tight = parse_presentation("<a,b|a^2,b^3>")
    loose = parse_presentation("  < a , b |  a^2 , b^3 >  ")
    assert tight == loose


def test_parse_no_relators():
    p = parse_presentation("< a, b | >")
    assert p.relators == ()


def test_parse_negative_exponent():
    # identity relators are dropped at construction
    p = parse_presentation("< a | a^-3 a^3 >")
    assert p.relators == ()


def test_parse_nested():
    p = parse_presentation("< a, b | ((a b)^2)^-1 (a b)^2 >")
    assert p.relators == ()


def test_commutator_bracket():
    p = parse_presentation("< a, b | [a, b] >")
    w = parse_word("a^-1 b^-1 a b", ("a", "b"))
    assert p.relators[0] == w


def test_parse_unknown_generator():
    with pytest.raises(ParseError):
        parse_presentation("< a | b^2 >")


def test_parse_error_carries_offset():
    with pytest.raises(ParseError) as info:
        parse_presentation("< a | a^$ >")
    assert info.value.offset == 8
    assert "offset 8" in str(info.value)


def test_parse_error_missing_close():
    with pytest.raises(ParseError):
        parse_presentation("< a | a^2")


def test_duplicate_generator_rejected():
    with pytest.raises(ValueError):
        parse_presentation("< a, a | a^2 >")


@pytest.mark.parametrize("bad", ["", "< a", "a | a^2 >", "< | a >",
                                 "< a | ^2 >", "< 1a | >"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ParseError):
        parse_presentation(bad)


def test_parse_word_trailing_caret():
    # regression: a caret at end of input must be a ParseError, not an
    # IndexError from reading past the token stream
    with pytest.raises(ParseError):
        parse_word("a^", GENS)


def test_parse_word_eof_in_bracket():
    with pytest.raises(ParseError):
        parse_word("[a, ", GENS)


def test_free_reduce_cancels():
    w = ((0, 1), (1, 2), (1, -2), (0, -1), (2, 3))
    assert free_reduce(w) == ((2, 3),)


def test_free_reduce_merges_runs():
    assert free_reduce(((0, 2), (0, 3))) == ((0, 5),)


def test_word_mul_inverse():
    w = parse_word("a b^2 c^-1", GENS)
    assert (w * w.inverse()).is_identity
    assert (w.inverse() * w).is_identity


def test_word_pow():
    w = parse_word("a b", GENS)
    assert w ** 3 == parse_word("a b a b a b", GENS)
    assert (w ** -1) == w.inverse()
    assert (w ** 0).is_identity


def test_gen_word():
    assert gen_word(1) == Word(((1, 1),))


def test_word_shifted():
    w = parse_word("a b^-1", GENS)
    assert w.shifted(3) == Word(((3, 1), (4, -1)))


def test_cyclic_reduce():
    w = parse_word("a^-1 b a", GENS)
    assert cyclic_reduce(w) == parse_word("b", GENS)


def test_cyclic_reduce_keeps_interior():
    w = parse_word("a b a^-1", GENS)
    assert cyclic_reduce(w) == parse_word("b", GENS)


def test_commutator_helper():
    c = commutator(gen_word(0), gen_word(1))
    assert c == parse_word("a^-1 b^-1 a b", GENS)


def test_display_round_trip():
    p = parse_presentation("< x, y | x^4, y^2, [x, y] x^2 >")
    again = parse_presentation(p.display())
    assert again == p


def test_element_word_table_cyclic():
    p = parse_presentation("< a | a^4 >")
    table = enumerate_cosets(p)
    words = element_word_table(p, table)
    assert len(words) == 4
    assert words[0].is_identity


word_syllables = st.lists(
    st.tuples(st.integers(0, 2), st.integers(-3, 3).filter(bool)),
    max_size=8)


@given(word_syllables)
def test_free_reduce_idempotent(syl):
    once = free_reduce(tuple(syl))
    assert free_reduce(once) == once


@given(word_syllables, word_syllables)
def test_reduction_respects_concatenation(s1, s2):
    a, b = Word(tuple(s1)), Word(tuple(s2))
    direct = a * b
    assert free_reduce(direct.syllables) == direct.syllables


@given(word_syllables)
def test_inverse_cancels(syl):
    w = Word(tuple(syl))
    assert (w * w.inverse()).is_identity


@given(word_syllables)
def test_text_parse_round_trip(syl):
    w = Word(tuple(syl))
    assert parse_word(w.text(GENS), GENS) == w
