"""Coset enumeration against groups whose orders and subgroup indexes
are known in closed form."""

import pytest
from hypothesis import given, settings, strategies as st

from tensoria.coset_enum import EnumLimits, enumerate_cosets
from tensoria.errors import LimitExceeded
from tensoria.presentation import parse_presentation, parse_word


def pres(text):
    return parse_presentation(text)


def test_cyclic_regular():
    table = enumerate_cosets(pres("< a | a^7 >"))
    assert table.coset_count == 7


def test_trivial_group():
    table = enumerate_cosets(pres("< a | a >"))
    assert table.coset_count == 1


def test_free_factor_collapse():
    # b is forced trivial, leaving C3
    table = enumerate_cosets(pres("< a, b | a^3, b >"))
    assert table.coset_count == 3


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_dihedral_order(n):
    table = enumerate_cosets(
        pres(f"< r, s | r^{n}, s^2, [r, s] r^2 >"))
    assert table.coset_count == 2 * n


def test_quaternion_order():
    table = enumerate_cosets(pres("< i, j | i^4, j^2 i^-2, j^-1 i j i >"))
    assert table.coset_count == 8


def test_s4_order():
    table = enumerate_cosets(pres("< a, b | a^4, b^2, (a b)^3 >"))
    assert table.coset_count == 24


def test_subgroup_index():
    # <r> has index 2 in D4
    p = pres("< r, s | r^4, s^2, [r, s] r^2 >")
    table = enumerate_cosets(p, [parse_word("r", p.generators)])
    assert table.coset_count == 2


def test_subgroup_whole_group():
    p = pres("< a | a^6 >")
    table = enumerate_cosets(p, [parse_word("a", p.generators)])
    assert table.coset_count == 1


def test_permutations_satisfy_relators():
    p = pres("< r, s | r^5, s^2, [r, s] r^2 >")
    table = enumerate_cosets(p)
    perms = table.permutations()
    assert len(perms) == 2
    r, s = perms
    def mul(x, y):
        return tuple(y[i] for i in x)
    acc = tuple(range(table.coset_count))
    for _ in range(5):
        acc = mul(acc, r)
    assert acc == tuple(range(table.coset_count))
    assert mul(s, s) == tuple(range(table.coset_count))


def test_follow_matches_permutations():
    p = pres("< a | a^4 >")
    table = enumerate_cosets(p)
    perm = table.permutations()[0]
    for c in range(table.coset_count):
        assert table.follow(c, 0, 1) == perm[c]


def test_max_cosets_limit():
    with pytest.raises(LimitExceeded) as info:
        enumerate_cosets(pres("< a | a^100 >"), limits=EnumLimits(max_cosets=10))
    assert info.value.limit_name == "max_cosets"


def test_scan_budget_limit():
    with pytest.raises(LimitExceeded) as info:
        enumerate_cosets(pres("< a, b | a^12, b^12, (a b)^12 >"),
                         limits=EnumLimits(scan_budget=50))
    assert info.value.limit_name == "scan_budget"


def test_felsch_agrees_with_hlt():
    p = pres("< r, s | r^6, s^2, [r, s] r^2 >")
    hlt = enumerate_cosets(p, strategy="hlt")
    felsch = enumerate_cosets(p, strategy="felsch")
    assert hlt.coset_count == felsch.coset_count == 12


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError):
        enumerate_cosets(pres("< a | a^2 >"), strategy="guess")


@settings(deadline=None, max_examples=25)
@given(st.integers(1, 30))
def test_cyclic_orders(n):
    assert enumerate_cosets(pres(f"< a | a^{n} >")).coset_count == n


@settings(deadline=None, max_examples=20)
@given(st.integers(2, 8), st.integers(2, 8))
def test_direct_product_of_cyclics(m, n):
    p = pres(f"< a, b | a^{m}, b^{n}, [a, b] >")
    assert enumerate_cosets(p).coset_count == m * n
