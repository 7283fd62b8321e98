"""Permutation groups, homomorphisms, and re-presentation."""

import pytest
from hypothesis import given, settings, strategies as st

from tensoria.abelian import AbelianGroup
from tensoria.permgrp import (
    PermGroup,
    abelian_invariants,
    cayley_presentation,
    define_hom,
    identity_perm,
    perm_commutator,
    perm_conjugate,
    perm_cycles,
    perm_from_cycles,
    perm_inverse,
    perm_mul,
    perm_order,
    perm_pow,
    realize,
    reduced_generators,
    trivial_group,
)
from tensoria.presentation import parse_presentation

from conftest import make_group


def test_perm_mul_order():
    # left-to-right composition: x (a*b) = (x a) b
    a = (1, 0, 2)
    b = (0, 2, 1)
    assert perm_mul(a, b) == (2, 0, 1)


def test_perm_inverse():
    p = (2, 0, 3, 1)
    assert perm_mul(p, perm_inverse(p)) == identity_perm(4)


def test_perm_pow_negative():
    p = (1, 2, 3, 0)
    assert perm_pow(p, -1) == perm_inverse(p)
    assert perm_pow(p, 4) == identity_perm(4)


def test_perm_order():
    assert perm_order((1, 2, 0, 4, 3)) == 6


def test_perm_conjugate():
    p = (1, 0, 2)
    z = (0, 2, 1)
    assert perm_conjugate(p, z) == perm_mul(perm_inverse(z), perm_mul(p, z))


def test_perm_commutator_identity_when_commuting():
    p = (1, 2, 3, 0)
    assert perm_commutator(p, perm_pow(p, 2)) == identity_perm(4)


def test_cycles_round_trip():
    p = (1, 2, 0, 4, 3, 5)
    assert perm_from_cycles(6, perm_cycles(p)) == p


def test_symmetric_group_order():
    g = PermGroup([(1, 0, 2, 3), (1, 2, 3, 0)], 4)
    assert g.order() == 24


def test_alternating_group():
    g = PermGroup([(1, 2, 0, 3), (0, 2, 3, 1)], 4)
    assert g.order() == 12
    assert g.derived_subgroup().order() == 4


def test_contains():
    g = PermGroup([(1, 2, 0, 3)], 4)
    assert (2, 0, 1, 3) in g
    assert (1, 0, 2, 3) not in g


def test_center_of_d4():
    d4 = make_group("D4").group
    z = d4.center()
    assert z.order() == 2


def test_center_of_abelian_is_whole():
    v4 = make_group("V4").group
    assert v4.center().order() == 4


def test_derived_series_s4():
    s4 = make_group("S4").group
    d1 = s4.derived_subgroup()
    assert d1.order() == 12
    assert d1.derived_subgroup().order() == 4


def test_lower_central_series_d4():
    d4 = make_group("D4").group
    series = d4.lower_central_series()
    assert [g.order() for g in series] == [8, 2, 1]


def test_lower_central_series_s3_stabilizes():
    s3 = make_group("S3").group
    series = s3.lower_central_series()
    assert series[-1].order() == 3


def test_upper_central_series_q8():
    q8 = make_group("Q8").group
    series = q8.upper_central_series()
    assert [g.order() for g in series] == [1, 2, 8]


def test_upper_central_series_h27():
    h = make_group("H27").group
    series = h.upper_central_series()
    assert [g.order() for g in series] == [1, 3, 27]


def test_quotient_d4_by_center():
    d4 = make_group("D4").group
    q, onto = d4.quotient(d4.center())
    assert q.order() == 4
    assert onto.kernel().order() == 2
    assert q.derived_subgroup().order() == 1


def test_quotient_requires_normal():
    s3 = make_group("S3").group
    refl = next(p for p in s3.elements() if perm_order(p) == 2)
    sub = PermGroup([refl], s3.degree)
    with pytest.raises(ValueError):
        s3.quotient(sub)


def test_normal_closure():
    s4 = make_group("S4").group
    three_cycle = next(p for p in s4.elements() if perm_order(p) == 3)
    assert s4.normal_closure([three_cycle]).order() == 12


def test_exponent():
    assert make_group("Q8").group.exponent() == 4
    assert make_group("V4").group.exponent() == 2


def test_is_abelian():
    assert make_group("C6").group.is_abelian()
    assert not make_group("S3").group.is_abelian()


def test_elements_count():
    g = make_group("D4").group
    els = g.elements()
    assert len(els) == 8
    assert len(set(els)) == 8


def test_trivial_group():
    t = trivial_group(3)
    assert t.order() == 1


def test_realize_orders():
    for name, order in [("C2", 2), ("V4", 4), ("S3", 6), ("D4", 8),
                        ("Q8", 8), ("A4", 12), ("S4", 24), ("H27", 27)]:
        assert make_group(name).order() == order, name


def test_realize_faithful_regular():
    g = make_group("Q8")
    assert g.degree == 8
    for p in g.gen_perms:
        assert len(p) == 8


def test_define_hom_image_kernel():
    # C4 -> C2, a -> swap
    pres = parse_presentation("< a | a^4 >")
    c4 = realize(pres, name="C4")
    c2 = PermGroup([(1, 0)], 2)
    hom = define_hom(pres, c4.group, [(1, 0)], c4.gen_perms)
    assert hom.image().order() == 2
    assert hom.kernel().order() == 2
    assert hom.image().generators[0] in c2


def test_define_hom_rejects_non_hom():
    # C4 -> C3 sending a generator of order 4 to one of order 3
    pres = parse_presentation("< a | a^4 >")
    c4 = realize(pres, name="C4")
    with pytest.raises(ValueError):
        define_hom(pres, c4.group, [(1, 2, 0)], c4.gen_perms)


def test_hom_apply_consistent(s3):
    # identity map: apply must fix every element
    hom = define_hom(s3.presentation, s3.group, list(s3.gen_perms),
                     s3.gen_perms)
    for p in s3.group.elements():
        assert hom.apply(p) == p


def test_reduced_generators_drops_redundant():
    g = PermGroup([(1, 0, 2), (1, 0, 2), (0, 2, 1)], 3)
    kept = reduced_generators(g)
    assert len(kept) == 2
    assert PermGroup(kept, 3).order() == g.order()


@pytest.mark.parametrize("name", ["C6", "V4", "S3", "D4", "Q8", "A4"])
def test_cayley_presentation_round_trip(name):
    g = make_group(name).group
    back = cayley_presentation(g, prefix="y", name=name)
    assert back.order() == g.order()


def test_abelian_invariants():
    assert abelian_invariants(make_group("V4").group) == AbelianGroup((2, 2))
    assert abelian_invariants(make_group("C6").group) == AbelianGroup((6,))
    assert abelian_invariants(make_group("S3").group) == AbelianGroup((2,))
    assert abelian_invariants(make_group("Q8").group) == AbelianGroup((2, 2))
    assert abelian_invariants(make_group("A4").group) == AbelianGroup((3,))
    assert abelian_invariants(make_group("H27").group) == AbelianGroup((3, 3))


def test_abelian_invariants_trivial():
    assert abelian_invariants(trivial_group(1)) == AbelianGroup()


@settings(deadline=None, max_examples=30)
@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_order_divides_group_order(p, q):
    g = PermGroup([tuple(p), tuple(q)], 6)
    assert g.order() % perm_order(tuple(p)) == 0
    assert tuple(p) in g and tuple(q) in g


@settings(deadline=None, max_examples=30)
@given(st.permutations(list(range(5))))
def test_canonical_coset_rep_constant_on_cosets(p):
    g = PermGroup([(1, 2, 3, 4, 0)], 5)
    p = tuple(p)
    rep = g.canonical_coset_rep(p)
    assert g.canonical_coset_rep(rep) == rep
    for s in g.elements():
        assert g.canonical_coset_rep(perm_mul(s, p)) == rep
