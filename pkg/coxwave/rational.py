"""Exact rational vectors and small matrices.

Box coordinates, lattice generators and dilations in frame coordinates are
kept as tuples of :class:`fractions.Fraction`; sympy does the exact
determinants and inverses.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
import numpy.typing as npt
import sympy

from .exceptions import RankDeficient

__all__ = (
    "RationalLike",
    "RationalVector",
    "RationalMatrix",
    "as_fraction",
    "vector",
    "matrix",
    "identity",
    "diagonal_matrix",
    "is_diagonal",
    "diagonal",
    "is_integral",
    "det",
    "inverse",
    "transpose",
    "matmul",
    "matvec",
    "to_float",
    "format_fraction",
)

RationalLike = Union[Fraction, int, str, float]
RationalVector = tuple[Fraction, ...]
RationalMatrix = tuple[RationalVector, ...]


def as_fraction(value: RationalLike) -> Fraction:
    """Convert to a Fraction without rounding.

    Strings may be integers, decimals or ``"p/q"``; floats keep their exact
    binary value.
    """

    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    return Fraction(value)


def vector(values: Iterable[RationalLike]) -> RationalVector:
    return tuple(as_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable[RationalLike]]) -> RationalMatrix:
    m = tuple(vector(row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise ValueError("rational matrices must be square")
    return m


def identity(n: int) -> RationalMatrix:
    return tuple(
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    )


def diagonal_matrix(entries: Sequence[RationalLike]) -> RationalMatrix:
    d = vector(entries)
    n = len(d)
    return tuple(
        tuple(d[i] if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def is_diagonal(m: RationalMatrix) -> bool:
    return all(
        m[i][j] == 0 for i in range(len(m)) for j in range(len(m)) if i != j
    )


def diagonal(m: RationalMatrix) -> RationalVector:
    return tuple(m[i][i] for i in range(len(m)))


def is_integral(m: RationalMatrix) -> bool:
    return all(x.denominator == 1 for row in m for x in row)


def _to_sympy(m: RationalMatrix) -> sympy.Matrix:
    return sympy.Matrix(
        [
            [sympy.Rational(x.numerator, x.denominator) for x in row]
            for row in m
        ]
    )


def _from_sympy_scalar(x: sympy.Expr) -> Fraction:
    r = sympy.Rational(x)
    return Fraction(int(r.p), int(r.q))


def det(m: RationalMatrix) -> Fraction:
    return _from_sympy_scalar(_to_sympy(m).det())


def inverse(m: RationalMatrix, what: str = "matrix") -> RationalMatrix:
    sm = _to_sympy(m)
    if sm.det() == 0:
        raise RankDeficient(what)
    inv = sm.inv()
    n = len(m)
    return tuple(
        tuple(_from_sympy_scalar(inv[i, j]) for j in range(n))
        for i in range(n)
    )


def transpose(m: RationalMatrix) -> RationalMatrix:
    return tuple(zip(*m))


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    bt = transpose(b)
    return tuple(
        tuple(
            sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt
        )
        for row in a
    )


def matvec(a: RationalMatrix, v: Sequence[Fraction]) -> RationalVector:
    return tuple(
        sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a
    )


def to_float(m: RationalMatrix) -> npt.NDArray[np.float64]:
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def format_fraction(x: Fraction) -> str:
    """``"p/q"``, or ``"p"`` for integers."""

    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
