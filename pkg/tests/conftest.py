"""Shared builds for the test suite.

Tensor constructions are the expensive part, so the squares that several
test modules poke at are built once per session.
"""

import pytest

from tensoria.permgrp import PresentedGroup, realize
from tensoria.presentation import parse_presentation
from tensoria.tensor import TensorGroup, build_nu

PRESENTATIONS = {
    "C2": "< a | a^2 >",
    "C3": "< a | a^3 >",
    "C4": "< a | a^4 >",
    "C6": "< a | a^6 >",
    "V4": "< a, b | a^2, b^2, [a, b] >",
    "Z2^3": "< a, b, c | a^2, b^2, c^2, [a, b], [a, c], [b, c] >",
    "S3": "< s, r | s^2, r^3, (s r)^2 >",
    "D4": "< r, s | r^4, s^2, [r, s] r^2 >",
    "Q8": "< i, j | i^4, j^2 i^-2, j^-1 i j i >",
    "A4": "< a, b | a^3, b^2, (a b)^3 >",
    "S4": "< a, b | a^4, b^2, (a b)^3 >",
    "H27": "< a, b, c | a^3, b^3, c^3, [a, b] c^-1, [a, c], [b, c] >",
}


def make_group(name: str) -> PresentedGroup:
    return realize(parse_presentation(PRESENTATIONS[name]), name=name)


@pytest.fixture(scope="session")
def v4() -> PresentedGroup:
    return make_group("V4")


@pytest.fixture(scope="session")
def s3() -> PresentedGroup:
    return make_group("S3")


@pytest.fixture(scope="session")
def d4() -> PresentedGroup:
    return make_group("D4")


@pytest.fixture(scope="session")
def q8() -> PresentedGroup:
    return make_group("Q8")


@pytest.fixture(scope="session")
def a4() -> PresentedGroup:
    return make_group("A4")


@pytest.fixture(scope="session")
def v4_square(v4) -> TensorGroup:
    return build_nu(v4)


@pytest.fixture(scope="session")
def s3_square(s3) -> TensorGroup:
    return build_nu(s3)


@pytest.fixture(scope="session")
def d4_square(d4) -> TensorGroup:
    return build_nu(d4)


@pytest.fixture(scope="session")
def q8_square(q8) -> TensorGroup:
    return build_nu(q8)


@pytest.fixture(scope="session")
def a4_square(a4) -> TensorGroup:
    return build_nu(a4)
