from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from oracles import mat_add, mat_det, mat_mul, mat_of, mat_pair, to_sympy
from wimanedge.qfield import (
    MOD2,
    MOD4,
    MOD4P5,
    MODP5,
    ONE,
    SQRT5,
    X,
    DomainError,
    Place,
    QuadElt,
    format_quad,
    is_totally_positive,
    parse_quad,
    reduce,
)

SAMPLES = [
    QuadElt(0),
    QuadElt(1),
    QuadElt(0, 1),
    QuadElt(3, -2),
    QuadElt(Fraction(1, 2), Fraction(-7, 3)),
    QuadElt(-5, 8),
]


def pair(x: QuadElt):
    return (x.a, x.b)


def test_golden_relation():
    assert X * X == X + ONE
    assert SQRT5 * SQRT5 == QuadElt(5)


@pytest.mark.parametrize("x", SAMPLES)
@pytest.mark.parametrize("y", SAMPLES)
def test_arithmetic_matches_matrix_model(x, y):
    mx, my = mat_of(*pair(x)), mat_of(*pair(y))
    assert pair(x * y) == mat_pair(mat_mul(mx, my))
    assert pair(x + y) == mat_pair(mat_add(mx, my))


@pytest.mark.parametrize("x", SAMPLES)
def test_norm_is_determinant(x):
    assert x.norm() == mat_det(mat_of(*pair(x)))


@pytest.mark.parametrize("x", SAMPLES[1:])
def test_inverse(x):
    assert x * x.inv() == ONE
    assert sympy.simplify(to_sympy(pair(x.inv())) * to_sympy(pair(x)) - 1) == 0


def test_zero_has_no_inverse():
    with pytest.raises((DomainError, ZeroDivisionError)):
        QuadElt(0).inv()


@pytest.mark.parametrize("x", SAMPLES)
def test_embedding_matches_sympy(x):
    assert x.embed(Place.FIRST) == pytest.approx(float(to_sympy(pair(x))))


def test_total_positivity():
    assert is_totally_positive(X + 1)
    assert not is_totally_positive(X)  # conjugate of X is negative
    assert not is_totally_positive(QuadElt(0))


@pytest.mark.parametrize("text", ["0", "1", "X", "-X", "4 - 5*X", "-1/2 + 1/2*X", "3/7*X"])
def test_format_parse_round_trip(text):
    assert format_quad(parse_quad(text)) == text


@pytest.mark.parametrize("bad", ["", "X X", "*X", "1 +", "abc"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_quad(bad)


def test_ring_sizes():
    assert len(MOD2.elements()) == 4
    assert len(MOD4.elements()) == 16
    assert len(MODP5.elements()) == 5
    assert len(MOD4P5.elements()) == 80


def test_p5_is_the_prime_over_5():
    # X = 3 in O/p5 since 3^2 = 3 + 1 mod 5
    assert reduce(SQRT5, MODP5).is_zero()
    assert reduce(X, MODP5) == reduce(QuadElt(3), MODP5)


def test_reduce_rejects_non_integral():
    with pytest.raises(DomainError):
        reduce(QuadElt(Fraction(1, 2)), MOD2)
