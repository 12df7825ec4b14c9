from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from coxwave.exceptions import FrameMismatch, RankDeficient, ZeroScaleFactor
from coxwave.region import (
    Box,
    Frame,
    Region,
    fourier_indicator,
    region_coalesce,
    region_contains,
    region_intersect,
    region_scale_diag,
    region_subtract,
    region_translate,
    region_union,
    region_volume,
    same_set,
)

F2 = Frame.identity(2)


@st.composite
def boxes(draw: st.DrawFn, dim: int = 2) -> Box:
    lo, hi = [], []
    for _ in range(dim):
        a = draw(st.integers(-16, 15))
        w = draw(st.integers(1, 16))
        lo.append(Fraction(a, 4))
        hi.append(Fraction(a + w, 4))
    return Box(tuple(lo), tuple(hi))


@st.composite
def regions(draw: st.DrawFn) -> Region:
    return Region.from_boxes(F2, draw(st.lists(boxes(), max_size=4)))


def test_box_validation() -> None:
    with pytest.raises(ValueError):
        Box.of((0, 0), (1, 0))
    with pytest.raises(ValueError):
        Box.of((0,), (1, 1))


def test_box_basics() -> None:
    b = Box.of((0, 0), ("1/2", 2))
    assert b.volume == 1
    assert b.center == (Fraction(1, 4), Fraction(1))
    assert len(b.corners()) == 4
    moved = b.translate((Fraction(1), Fraction(0)))
    assert moved == Box.of((1, 0), ("3/2", 2))
    assert b.scale((Fraction(-2), Fraction(1))) == Box.of((-1, 0), (0, 2))


@given(boxes(), boxes())
def test_box_minus_partitions(a: Box, b: Box) -> None:
    pieces = a.minus(b)
    assert len(pieces) <= 2 * a.dim
    cut = a.intersect(b)
    covered = sum((p.volume for p in pieces), Fraction(0))
    assert covered + (cut.volume if cut else 0) == a.volume
    for p in pieces:
        assert a.contains_box(p)
        assert b.intersect(p) is None


@given(regions(), regions())
def test_inclusion_exclusion(a: Region, b: Region) -> None:
    union = region_union(a, b)
    inter = region_intersect(a, b)
    assert union.check_disjoint()
    assert (
        union.exact_volume
        == a.exact_volume + b.exact_volume - inter.exact_volume
    )
    assert same_set(region_union(region_subtract(a, b), inter), a)


@given(regions())
def test_coalesce_keeps_the_set(a: Region) -> None:
    merged = region_coalesce(a)
    assert len(merged.cells) <= len(a.cells)
    assert same_set(merged, a)


def test_coalesce_merges_neighbours() -> None:
    a = Region.from_boxes(
        F2, [Box.of((0, 0), (1, 1)), Box.of((1, 0), (2, 1))]
    )
    assert region_coalesce(a).cells == (Box.of((0, 0), (2, 1)),)


def test_translate_and_scale() -> None:
    a = Region.box(F2, (0, 0), (1, 1))
    moved = region_translate(a, (1, "1/2"))
    assert moved.cells == (Box.of((1, "1/2"), (2, "3/2")),)
    big = region_scale_diag(a, (2, 3))
    assert big.exact_volume == 6
    with pytest.raises(ZeroScaleFactor):
        region_scale_diag(a, (0, 1))


def test_frame_mismatch() -> None:
    a = Region.box(F2, (0, 0), (1, 1))
    b = Region.box(Frame([[1.0, 1.0], [0.0, 1.0]]), (0, 0), (1, 1))
    with pytest.raises(FrameMismatch):
        region_union(a, b)


def test_singular_frame() -> None:
    with pytest.raises(RankDeficient):
        Frame([[1.0, 2.0], [2.0, 4.0]])


def test_ambient_volume_uses_frame() -> None:
    frame = Frame([[2.0, 1.0], [0.0, 1.0]])
    a = Region.box(frame, (0, 0), (1, "1/2"))
    assert region_volume(a) == pytest.approx(1.0)


def test_mask_half_open_and_boundary() -> None:
    a = Region.box(F2, (0, 0), (1, 1))
    inside, boundary = a.mask(
        [[0.5, 0.5], [0.0, 0.5], [1.0, 0.5], [2.0, 2.0]], eps=1e-9
    )
    assert inside.tolist() == [True, True, False, False]
    assert boundary.tolist() == [False, True, True, False]
    assert region_contains(a, [0.25, 0.75])
    assert not region_contains(a, [1.25, 0.75])


def test_mask_in_skew_frame() -> None:
    frame = Frame([[1.0, 1.0], [0.0, 1.0]])
    a = Region.box(frame, (0, 0), (1, 1))
    assert region_contains(a, [1.0, 0.5])
    assert not region_contains(a, [0.2, 0.5])


_QUAD = {"limit": 200, "epsabs": 1e-13, "epsrel": 1e-13}


def _axis_integral(lo: float, hi: float, eta: float) -> complex:
    re = quad(lambda x: np.cos(2 * np.pi * x * eta), lo, hi, **_QUAD)[0]
    im = quad(lambda x: -np.sin(2 * np.pi * x * eta), lo, hi, **_QUAD)[0]
    return complex(re, im)


def _oracle(a: Region, xi: np.ndarray) -> complex:
    eta = a.frame.basis.T @ xi
    total = 0j
    for cell in a.cells:
        term = 1 + 0j
        for j in range(a.dim):
            term *= _axis_integral(
                float(cell.lo[j]), float(cell.hi[j]), float(eta[j])
            )
        total += term
    return total * a.frame.det_abs


def test_fourier_indicator_matches_quadrature() -> None:
    rng = np.random.default_rng(12)
    for _ in range(50):
        dim = int(rng.integers(1, 4))
        basis = np.eye(dim) + 0.3 * rng.normal(size=(dim, dim))
        frame = Frame(basis)
        cells = []
        for k in range(int(rng.integers(1, 3))):
            lo = rng.integers(-4, 4, size=dim) / 4 + 4 * k
            width = rng.integers(1, 8, size=dim) / 4
            cells.append(
                Box(tuple(map(Fraction, lo)), tuple(map(Fraction, lo + width)))
            )
        a = Region(frame, tuple(cells))
        xi = rng.uniform(-3, 3, size=dim)
        got = complex(fourier_indicator(a, xi))
        want = _oracle(a, xi)
        assert abs(got - want) <= 1e-8 * max(1.0, region_volume(a))


def test_fourier_indicator_at_zero_is_volume() -> None:
    frame = Frame([[1.0, 0.5], [0.0, 2.0]])
    a = Region.from_boxes(
        frame, [Box.of((0, 0), (1, 1)), Box.of((2, 0), (3, "1/2"))]
    )
    assert fourier_indicator(a, np.zeros(2)) == pytest.approx(
        region_volume(a)
    )


@settings(max_examples=30)
@given(regions())
def test_fourier_indicator_is_additive(a: Region) -> None:
    b = Region.box(F2, (20, 20), (21, 22))
    xi = np.array([[0.3, -0.7], [1.1, 0.25]])
    whole = fourier_indicator(region_union(a, b), xi)
    parts = fourier_indicator(a, xi) + fourier_indicator(b, xi)
    assert np.allclose(whole, parts, atol=1e-9)


@pytest.mark.parametrize(
    "shift", [(0, 0), (1, 0), ("1/3", "-5/2"), ("7/4", "1/8")]
)
def test_fourier_indicator_translation_modulates(
    shift: tuple[str | int, str | int],
) -> None:
    frame = Frame([[1.0, 0.5], [0.0, 2.0]])
    a = Region.from_boxes(
        frame, [Box.of((0, 0), (1, 1)), Box.of((2, 0), (3, "1/2"))]
    )
    v = tuple(Fraction(s) for s in shift)
    ambient = frame.basis @ np.array([float(s) for s in v])
    xi = np.array([[0.0, 0.0], [0.3, -0.7], [1.1, 0.25], [-2.5, 3.0]])
    moved = fourier_indicator(region_translate(a, v), xi)
    phase = np.exp(-2j * np.pi * (xi @ ambient))
    assert np.allclose(moved, phase * fourier_indicator(a, xi), atol=1e-9)
    # no modulation at the origin
    assert moved[0] == pytest.approx(region_volume(a))


def test_fourier_indicator_shape_and_complex_argument() -> None:
    a = Region.box(F2, (0, 0), (1, 1))
    xi = np.zeros((3, 4, 2))
    assert fourier_indicator(a, xi).shape == (3, 4)
    value = fourier_indicator(a, np.array([0.0, -0.5j]))
    # integral of exp(-pi y) over [0, 1)
    expected = (1 - np.exp(-np.pi)) / np.pi
    assert value == pytest.approx(expected)
