"""Schur multipliers through two disjoint routes.

Expected values: cyclic groups have trivial multiplier, elementary
abelian 2-groups of rank r have rank r(r-1)/2, the quaternion group is
trivial, and the small dihedral and alternating cases are Z2.
"""

import pytest

from tensoria.abelian import AbelianGroup
from tensoria.errors import SizeLimitError
from tensoria.homology import h2_cross_check, h2_via_cocycles, h2_via_wedge
from tensoria.tensor import build_nu, tensor_with_subgroup

from conftest import make_group


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
def test_cyclic_multiplier_trivial(n):
    from tensoria.presentation import parse_presentation
    from tensoria.permgrp import realize
    text = "< a | a >" if n == 1 else f"< a | a^{n} >"
    g = realize(parse_presentation(text), name=f"C{n}")
    assert h2_via_cocycles(g.group) == AbelianGroup()


def test_v4_multiplier():
    assert h2_via_cocycles(make_group("V4").group) == AbelianGroup((2,))


def test_elementary_rank3_multiplier():
    got = h2_via_cocycles(make_group("Z2^3").group)
    assert got == AbelianGroup((2, 2, 2))


@pytest.mark.parametrize("name,expect", [
    ("S3", AbelianGroup()),
    ("D4", AbelianGroup((2,))),
    ("Q8", AbelianGroup()),
    ("A4", AbelianGroup((2,))),
])
def test_named_multipliers(name, expect):
    assert h2_via_cocycles(make_group(name).group) == expect


def test_d6_multiplier():
    from tensoria.presentation import parse_presentation
    from tensoria.permgrp import realize
    d6 = realize(parse_presentation("< r, s | r^6, s^2, [r, s] r^2 >"),
                 name="D6")
    assert h2_via_cocycles(d6.group) == AbelianGroup((2,))


def test_cocycle_size_cap():
    with pytest.raises(SizeLimitError):
        h2_via_cocycles(make_group("S3").group, limit=4)


@pytest.mark.parametrize("fixture,expect", [
    ("v4_square", AbelianGroup((2,))),
    ("s3_square", AbelianGroup()),
    ("d4_square", AbelianGroup((2,))),
    ("q8_square", AbelianGroup()),
    ("a4_square", AbelianGroup((2,))),
])
def test_wedge_route(fixture, expect, request):
    assert h2_via_wedge(request.getfixturevalue(fixture)) == expect


def test_wedge_requires_square(s3):
    t = tensor_with_subgroup(s3, s3.group.derived_subgroup())
    with pytest.raises(ValueError):
        h2_via_wedge(t)


@pytest.mark.parametrize("fixture", ["v4_square", "s3_square", "d4_square",
                                     "q8_square", "a4_square"])
def test_routes_agree(fixture, request):
    t = request.getfixturevalue(fixture)
    report = h2_cross_check(t)
    assert report.agree
    assert report.wedge == report.cocycles


def test_cross_check_json(v4_square):
    data = h2_cross_check(v4_square).to_json()
    assert data["agree"] is True
    assert data["wedge"] == "Z2"
    assert data["cocycles"] == "Z2"
    assert data["group"] == "V4"
