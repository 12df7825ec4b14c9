from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from coxwave.exceptions import RankDeficient
from coxwave.rational import (
    as_fraction,
    det,
    diagonal_matrix,
    format_fraction,
    identity,
    inverse,
    is_diagonal,
    is_integral,
    matmul,
    matrix,
    matvec,
)

fractions = st.fractions(
    min_value=-8, max_value=8, max_denominator=12
)
matrices = st.lists(
    st.lists(fractions, min_size=3, max_size=3), min_size=3, max_size=3
).map(matrix)


def test_as_fraction() -> None:
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction("0.25") == Fraction(1, 4)
    assert as_fraction(0.1) == Fraction(0.1)
    assert as_fraction(7) == 7
    with pytest.raises(TypeError):
        as_fraction(True)


def test_matrix_must_be_square() -> None:
    with pytest.raises(ValueError):
        matrix([[1, 2, 3], [4, 5, 6]])


def test_diagonal_helpers() -> None:
    d = diagonal_matrix((2, "1/2"))
    assert is_diagonal(d)
    assert not is_integral(d)
    assert det(d) == 1
    assert is_integral(identity(3))
    assert matvec(d, (Fraction(1), Fraction(4))) == (2, 2)


@given(matrices)
def test_inverse_is_exact(m: tuple[tuple[Fraction, ...], ...]) -> None:
    assume(det(m) != 0)
    assert matmul(m, inverse(m)) == identity(3)
    assert det(inverse(m)) == 1 / det(m)


def test_singular_inverse() -> None:
    with pytest.raises(RankDeficient):
        inverse(matrix([[1, 2], [2, 4]]), "test")


@pytest.mark.parametrize(
    "x, text",
    [(Fraction(3), "3"), (Fraction(-1, 64), "-1/64"), (Fraction(0), "0")],
)
def test_format_fraction(x: Fraction, text: str) -> None:
    assert format_fraction(x) == text
    assert as_fraction(text) == x
