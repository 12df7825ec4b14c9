"""Finite unions of half-open boxes in frame coordinates.

A :class:`Region` is a tuple of pairwise disjoint cells ``[lo, hi)`` with
rational corners, read through a :class:`Frame` whose columns are the
basis vectors. Set operations are exact; only volumes in ambient units,
point masks and Fourier transforms go through floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from . import defaults
from .exceptions import FrameMismatch, RankDeficient, ZeroScaleFactor
from .rational import RationalLike, RationalVector, vector

__all__ = (
    "Frame",
    "Box",
    "Region",
    "region_union",
    "region_subtract",
    "region_intersect",
    "region_translate",
    "region_scale_diag",
    "region_volume",
    "region_contains",
    "region_coalesce",
    "same_set",
    "fourier_indicator",
)

_CHUNK = 1 << 16


class Frame:
    """An invertible linear frame. Column j is the j-th basis vector.

    Frames compare equal only when their matrices are bit-identical, so
    regions built from the same dual basis always share a frame.
    """

    __slots__ = ("basis", "inverse", "det_abs")

    def __init__(self, basis: npt.ArrayLike) -> None:
        b = np.array(basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError("a frame must be a square matrix")
        det = float(np.linalg.det(b))
        if abs(det) < 1e-14:
            raise RankDeficient("frame")
        b.setflags(write=False)
        inv = np.linalg.inv(b)
        inv.setflags(write=False)

        self.basis: npt.NDArray[np.float64] = b
        """Columns are the frame vectors."""
        self.inverse: npt.NDArray[np.float64] = inv
        self.det_abs: float = abs(det)
        """Ambient volume of the unit cell."""

    @classmethod
    def identity(cls, dim: int) -> Frame:
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def to_ambient(self, coords: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Map frame coordinates (rows) to ambient points."""

        return np.asarray(coords, dtype=float) @ self.basis.T

    def to_frame(self, points: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Map ambient points (rows) to frame coordinates."""

        return np.asarray(points, dtype=float) @ self.inverse.T

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return bool(np.array_equal(self.basis, other.basis))

    def __hash__(self) -> int:
        return hash(self.basis.tobytes())

    def __repr__(self) -> str:
        return f"Frame({self.basis.tolist()})"


@dataclass(frozen=True)
class Box:
    """The half-open box ``[lo, hi)`` in frame coordinates.

    Parameters
    ----------
    lo, hi : tuple[Fraction, ...]
        Corners with ``lo[j] < hi[j]`` for every axis.
    """

    lo: RationalVector
    hi: RationalVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", vector(self.lo))
        object.__setattr__(self, "hi", vector(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners have different dimensions")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo} .. {self.hi}")

    @classmethod
    def of(
        cls, lo: Sequence[RationalLike], hi: Sequence[RationalLike]
    ) -> Box:
        return cls(vector(lo), vector(hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> Fraction:
        return math.prod(
            (b - a for a, b in zip(self.lo, self.hi)), start=Fraction(1)
        )

    @property
    def center(self) -> tuple[Fraction, ...]:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    def corners(self) -> list[RationalVector]:
        return [
            tuple(pick) for pick in itertools.product(*zip(self.lo, self.hi))
        ]

    def intersect(self, other: Box) -> Box | None:
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a >= b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def contains_box(self, other: Box) -> bool:
        return all(a <= c for a, c in zip(self.lo, other.lo)) and all(
            d <= b for b, d in zip(self.hi, other.hi)
        )

    def minus(self, other: Box) -> list[Box]:
        """Disjoint boxes covering ``self \\ other`` (at most 2*dim)."""

        cut = self.intersect(other)
        if cut is None:
            return [self]
        pieces: list[Box] = []
        lo, hi = list(self.lo), list(self.hi)
        for j in range(self.dim):
            if lo[j] < cut.lo[j]:
                pieces.append(
                    Box(tuple(lo), tuple(hi[:j] + [cut.lo[j]] + hi[j + 1 :]))
                )
                lo[j] = cut.lo[j]
            if cut.hi[j] < hi[j]:
                pieces.append(
                    Box(tuple(lo[:j] + [cut.hi[j]] + lo[j + 1 :]), tuple(hi))
                )
                hi[j] = cut.hi[j]
        return pieces

    def translate(self, v: Sequence[Fraction]) -> Box:
        return Box(
            tuple(a + t for a, t in zip(self.lo, v)),
            tuple(b + t for b, t in zip(self.hi, v)),
        )

    def scale(self, factors: Sequence[Fraction]) -> Box:
        """The image under ``t -> diag(factors) t``.

        A negative factor reflects the axis; the image is again written as
        ``[lo, hi)``, which differs from the exact image only on a face.
        """

        lo, hi = [], []
        for a, b, f in zip(self.lo, self.hi, factors):
            p, q = sorted((a * f, b * f))
            lo.append(p)
            hi.append(q)
        return Box(tuple(lo), tuple(hi))


@dataclass(frozen=True, eq=False)
class Region:
    """A finite disjoint union of boxes read through a frame.

    Use :func:`same_set` for set equality; ``==`` is identity.
    """

    frame: Frame
    cells: tuple[Box, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        if any(c.dim != self.frame.dim for c in self.cells):
            raise ValueError("cell dimension does not match the frame")

    @classmethod
    def box(
        cls,
        frame: Frame,
        lo: Sequence[RationalLike],
        hi: Sequence[RationalLike],
    ) -> Region:
        return cls(frame, (Box.of(lo, hi),))

    @classmethod
    def empty(cls, frame: Frame) -> Region:
        return cls(frame, ())

    @classmethod
    def from_boxes(cls, frame: Frame, boxes: Iterable[Box]) -> Region:
        """Build a region from possibly overlapping boxes."""

        out = cls.empty(frame)
        for b in boxes:
            out = region_union(out, cls(frame, (b,)))
        return out

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def exact_volume(self) -> Fraction:
        """Volume in frame units."""

        return sum((c.volume for c in self.cells), Fraction(0))

    def bounds(self) -> tuple[RationalVector, RationalVector]:
        """The frame-coordinate bounding box of the cells."""

        if not self.cells:
            raise ValueError("an empty region has no bounds")
        lo = tuple(min(c.lo[j] for c in self.cells) for j in range(self.dim))
        hi = tuple(max(c.hi[j] for c in self.cells) for j in range(self.dim))
        return lo, hi

    @cached_property
    def _lo(self) -> npt.NDArray[np.float64]:
        return np.array(
            [[float(x) for x in c.lo] for c in self.cells], dtype=float
        ).reshape(-1, self.dim)

    @cached_property
    def _hi(self) -> npt.NDArray[np.float64]:
        return np.array(
            [[float(x) for x in c.hi] for c in self.cells], dtype=float
        ).reshape(-1, self.dim)

    def mask(
        self, points: npt.ArrayLike, eps: float = defaults.EPS_GEOM
    ) -> tuple[npt.NDArray[np.bool_], npt.NDArray[np.bool_]]:
        """Membership of ambient points (rows).

        Returns
        -------
        inside, boundary
            `inside` marks points in some cell; `boundary` marks points
            within `eps` (frame units) of a cell face, where membership is
            not trusted.
        """

        t = self.frame.to_frame(np.atleast_2d(np.asarray(points, float)))
        n = t.shape[0]
        inside = np.zeros(n, dtype=bool)
        boundary = np.zeros(n, dtype=bool)
        if not self.cells:
            return inside, boundary

        lo, hi = self._lo, self._hi
        near_box = np.all(
            (t >= lo.min(axis=0) - eps) & (t < hi.max(axis=0) + eps), axis=1
        )
        idx = np.flatnonzero(near_box)
        if idx.size == 0:
            return inside, boundary
        tc = t[idx]
        hit = np.zeros(idx.size, dtype=bool)
        edge = np.zeros(idx.size, dtype=bool)
        for clo, chi in zip(lo, hi):
            hit |= np.all((tc >= clo) & (tc < chi), axis=1)
            grown = np.all((tc >= clo - eps) & (tc < chi + eps), axis=1)
            on_face = np.any(
                (np.abs(tc - clo) <= eps) | (np.abs(tc - chi) <= eps), axis=1
            )
            edge |= grown & on_face
        inside[idx] = hit
        boundary[idx] = edge
        return inside, boundary

    def check_disjoint(self) -> bool:
        """Exact pairwise disjointness of the cells."""

        return not any(
            a.intersect(b) is not None
            for a, b in itertools.combinations(self.cells, 2)
        )


def _same_frame(*regions: Region) -> Frame:
    frame = regions[0].frame
    if any(r.frame != frame for r in regions[1:]):
        raise FrameMismatch()
    return frame


def _subtract_cells(
    cells: Iterable[Box], cutters: Sequence[Box]
) -> list[Box]:
    out = list(cells)
    for cutter in cutters:
        nxt: list[Box] = []
        for c in out:
            nxt.extend(c.minus(cutter))
        out = nxt
        if not out:
            break
    return out


def region_union(a: Region, b: Region) -> Region:
    frame = _same_frame(a, b)
    extra = _subtract_cells(b.cells, a.cells)
    return Region(frame, a.cells + tuple(extra))


def region_subtract(a: Region, b: Region) -> Region:
    frame = _same_frame(a, b)
    return Region(frame, tuple(_subtract_cells(a.cells, b.cells)))


def region_intersect(a: Region, b: Region) -> Region:
    frame = _same_frame(a, b)
    cells = []
    for x in a.cells:
        for y in b.cells:
            if (z := x.intersect(y)) is not None:
                cells.append(z)
    return Region(frame, tuple(cells))


def region_translate(a: Region, v: Sequence[RationalLike]) -> Region:
    """Translate by `v` given in frame coordinates."""

    t = vector(v)
    return Region(a.frame, tuple(c.translate(t) for c in a.cells))


def region_scale_diag(a: Region, factors: Sequence[RationalLike]) -> Region:
    """Apply ``diag(factors)`` in frame coordinates.

    Raises
    ------
    ZeroScaleFactor
        Some factor is zero.
    """

    f = vector(factors)
    if any(x == 0 for x in f):
        raise ZeroScaleFactor(f)
    return Region(a.frame, tuple(c.scale(f) for c in a.cells))


def region_volume(a: Region) -> float:
    """Ambient Lebesgue measure."""

    return float(a.exact_volume) * a.frame.det_abs


def region_contains(
    a: Region, x: npt.ArrayLike, eps: float = defaults.EPS_GEOM
) -> bool:
    """Membership of a single ambient point."""

    inside, _ = a.mask(np.asarray(x, dtype=float).reshape(1, -1), eps)
    return bool(inside[0])


def same_set(a: Region, b: Region) -> bool:
    """Exact set equality."""

    _same_frame(a, b)
    return (
        a.exact_volume == b.exact_volume
        and region_subtract(a, b).is_empty
        and region_subtract(b, a).is_empty
    )


def _merge(x: Box, y: Box) -> Box | None:
    axis = None
    for j in range(x.dim):
        if x.lo[j] == y.lo[j] and x.hi[j] == y.hi[j]:
            continue
        if axis is not None:
            return None
        axis = j
    if axis is None:
        return x
    if x.hi[axis] == y.lo[axis]:
        return Box(x.lo, y.hi)
    if y.hi[axis] == x.lo[axis]:
        return Box(y.lo, x.hi)
    return None


def region_coalesce(a: Region) -> Region:
    """Merge cells sharing a full face until no merge is left."""

    cells = list(a.cells)
    merged = True
    while merged:
        merged = False
        for i, j in itertools.combinations(range(len(cells)), 2):
            if (m := _merge(cells[i], cells[j])) is not None:
                cells[i] = m
                del cells[j]
                merged = True
                break
    return Region(a.frame, tuple(cells))


def fourier_indicator(
    a: Region, xi: npt.ArrayLike
) -> npt.NDArray[np.complex128]:
    """The Fourier transform of the indicator of `a`.

    ``FA(xi) = integral over A of exp(-2 pi i (x, xi)) dx``. `xi` has shape
    ``(..., dim)`` and may be complex, which evaluates the entire extension.
    Each cell contributes ``|det F| prod_j exp(-2 pi i eta_j c_j) w_j
    sinc(eta_j w_j)`` with ``eta = F^T xi``, centre c and width w.
    """

    xi_arr = np.asarray(xi)
    shape = xi_arr.shape[:-1]
    eta = (xi_arr.reshape(-1, a.dim) @ a.frame.basis).astype(complex)
    out = np.zeros(eta.shape[0], dtype=complex)
    if not a.cells:
        return out.reshape(shape)

    width = a._hi - a._lo
    center = (a._hi + a._lo) / 2
    step = max(1, _CHUNK // len(a.cells))
    for start in range(0, eta.shape[0], step):
        e = eta[start : start + step, None, :]
        factors = (
            np.exp(-2j * np.pi * e * center)
            * width
            * np.sinc(e * width)
        )
        out[start : start + step] = np.prod(factors, axis=2).sum(axis=1)
    return (out * a.frame.det_abs).reshape(shape)

