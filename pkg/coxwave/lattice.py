"""Full-rank lattices, dilation schemes, digit sets and translation tiling.

A :class:`Lattice` and a :class:`DilationScheme` live in a frame, like a
region, with their matrices kept exactly in frame coordinates.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import numpy.typing as npt

from .exceptions import (
    FrameMismatch,
    LatticeIncompatible,
    NonExpansive,
    RankDeficient,
    UnsupportedTransform,
)
from .rational import (
    RationalLike,
    RationalMatrix,
    RationalVector,
    det,
    diagonal,
    diagonal_matrix,
    identity,
    inverse,
    is_diagonal,
    is_integral,
    matmul,
    matrix,
    matvec,
    to_float,
    transpose,
)
from .region import (
    Box,
    Frame,
    Region,
    fourier_indicator,
    region_subtract,
    region_volume,
)

__all__ = (
    "Lattice",
    "DilationScheme",
    "DigitSet",
    "TileReport",
    "digit_representatives",
    "snake_key",
    "reduce_mod_lattice",
    "overlap_volume",
    "is_translation_tile",
    "gram_max_offdiag",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class Lattice:
    """The lattice ``F G Z^n``.

    Parameters
    ----------
    frame : Frame
        The frame the generator is written in.
    generator : RationalMatrix
        Columns are the basis vectors in frame coordinates.
    """

    frame: Frame
    generator: RationalMatrix

    def __post_init__(self) -> None:
        g = matrix(self.generator)
        if len(g) != self.frame.dim:
            raise ValueError("generator and frame dimensions differ")
        if det(g) == 0:
            raise RankDeficient("lattice generator")
        object.__setattr__(self, "generator", g)

    @classmethod
    def integer(cls, frame: Frame) -> Lattice:
        """The lattice spanned by the frame vectors themselves."""

        return cls(frame, identity(frame.dim))

    @classmethod
    def rectangular(
        cls, frame: Frame, steps: Sequence[RationalLike]
    ) -> Lattice:
        return cls(frame, diagonal_matrix(steps))

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def is_rectangular(self) -> bool:
        return is_diagonal(self.generator)

    @property
    def steps(self) -> RationalVector:
        """Side lengths of the fundamental box of a rectangular lattice.

        Raises
        ------
        LatticeIncompatible
            The generator is not diagonal in the frame.
        """

        if not self.is_rectangular:
            raise LatticeIncompatible("the lattice is not rectangular")
        return tuple(abs(x) for x in diagonal(self.generator))

    @property
    def ambient_generator(self) -> FloatArray:
        return self.frame.basis @ to_float(self.generator)

    @property
    def covolume(self) -> float:
        return self.frame.det_abs * float(abs(det(self.generator)))

    def fundamental_box(self) -> Region:
        zero = (Fraction(0),) * self.dim
        return Region(self.frame, (Box(zero, self.steps),))

    def dual(self) -> Lattice:
        """``{y : (x, y) in Z for all x in the lattice}``."""

        return Lattice(
            Frame(self.frame.inverse.T),
            transpose(inverse(self.generator, "lattice generator")),
        )

    def points(
        self, radius: float, norm: str = "l2"
    ) -> tuple[npt.NDArray[np.int64], FloatArray]:
        """Lattice points of norm at most `radius`.

        Returns
        -------
        indices, points
            Integer coordinates and the ambient points, one per row.
        """

        g = self.ambient_generator
        ginv = np.linalg.inv(g)
        bound = np.floor(radius * np.linalg.norm(ginv, axis=1) + 1e-9)
        if norm == "sup":
            bound = np.floor(
                radius * np.abs(ginv).sum(axis=1) + 1e-9
            )
        axes = [np.arange(-int(b), int(b) + 1) for b in bound]
        idx = np.array(list(itertools.product(*axes)), dtype=np.int64)
        pts = idx @ g.T
        if norm == "sup":
            keep = np.max(np.abs(pts), axis=1) <= radius + 1e-12
        else:
            keep = np.linalg.norm(pts, axis=1) <= radius + 1e-12
        return idx[keep], pts[keep]


@dataclass(frozen=True, eq=False)
class DilationScheme:
    """An expansive dilation ``B`` written in a frame.

    ``A = B^T`` acts on space and ``L = (B^-1)^T`` is its inverse; ``B``
    acts on the frequency side. Region scaling needs `matrix` to be
    diagonal; digit sets work with any integral ``B``.

    Raises
    ------
    NonExpansive
        Some eigenvalue has modulus at most one.
    """

    frame: Frame
    matrix: RationalMatrix
    """``B`` in frame coordinates."""

    def __post_init__(self) -> None:
        m = matrix(self.matrix)
        if len(m) != self.frame.dim:
            raise ValueError("dilation and frame dimensions differ")
        moduli = np.abs(np.linalg.eigvals(to_float(m)))
        if np.any(moduli <= 1.0 + 1e-12):
            raise NonExpansive(moduli.tolist())
        object.__setattr__(self, "matrix", m)

    @classmethod
    def diagonal(
        cls, frame: Frame, scales: Sequence[RationalLike]
    ) -> DilationScheme:
        return cls(frame, diagonal_matrix(scales))

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def is_diagonal(self) -> bool:
        return is_diagonal(self.matrix)

    @property
    def scales(self) -> RationalVector:
        """The diagonal a_1..a_n.

        Raises
        ------
        UnsupportedTransform
            ``B`` is not diagonal in the frame.
        """

        if not self.is_diagonal:
            raise UnsupportedTransform()
        return diagonal(self.matrix)

    @property
    def q(self) -> Fraction:
        """``|det B|``."""

        return abs(det(self.matrix))

    def ambient(self, power: int = 1) -> FloatArray:
        """``B^power`` in ambient coordinates."""

        f = self.frame
        m = np.linalg.matrix_power(to_float(self.matrix), power)
        return np.asarray(f.basis @ m @ f.inverse)

    def inverse_transpose(self, power: int = 1) -> FloatArray:
        """``L^power`` in ambient coordinates."""

        return np.linalg.inv(self.ambient(power)).T

    def scale_factors(self, power: int) -> RationalVector:
        return tuple(a**power for a in self.scales)


def snake_key(z: Sequence[int]) -> tuple[int, ...]:
    """Reflected ordering key: the highest coordinate is the slowest."""

    key: list[int] = []
    parity = 0
    for v in reversed(z):
        key.append(v if parity % 2 == 0 else -v)
        parity += v
    return tuple(key)


@dataclass(frozen=True, eq=False)
class DigitSet:
    """Representatives of ``T / BT``.

    The zero digit comes first; the others follow in reflected
    (boustrophedon) order of their lattice coordinates, so consecutive
    digits differ in one coordinate.
    """

    lattice: Lattice
    scheme: DilationScheme
    coordinates: tuple[tuple[int, ...], ...]
    """Integer coordinates of each digit in the lattice basis."""

    @property
    def q(self) -> int:
        return len(self.coordinates)

    @property
    def digits(self) -> tuple[RationalVector, ...]:
        """The digits in frame coordinates."""

        g = self.lattice.generator
        return tuple(
            matvec(g, [Fraction(v) for v in z]) for z in self.coordinates
        )

    def ambient(self) -> FloatArray:
        return np.array(
            [[float(x) for x in d] for d in self.digits], dtype=float
        ) @ self.lattice.frame.basis.T


def digit_representatives(
    scheme: DilationScheme, lattice: Lattice
) -> DigitSet:
    """Enumerate ``q = |det B|`` coset representatives of ``T / BT``.

    Raises
    ------
    FrameMismatch
        The scheme and the lattice live in different frames.
    LatticeIncompatible
        ``BT`` is not a sublattice of ``T``.
    """

    if scheme.frame != lattice.frame:
        raise FrameMismatch()
    g = lattice.generator
    m = matmul(matmul(inverse(g), scheme.matrix), g)
    if not is_integral(m):
        raise LatticeIncompatible("B T is not contained in T")
    m_inv = inverse(m)
    n = len(m)

    corners = [
        matvec(m, [Fraction(c) for c in pick])
        for pick in itertools.product((0, 1), repeat=n)
    ]
    ranges = [
        range(
            math.floor(min(c[j] for c in corners)),
            math.ceil(max(c[j] for c in corners)) + 1,
        )
        for j in range(n)
    ]
    found = []
    for z in itertools.product(*ranges):
        y = matvec(m_inv, [Fraction(v) for v in z])
        if all(0 <= t < 1 for t in y):
            found.append(tuple(z))

    q = abs(det(m))
    assert len(found) == q, (len(found), q)
    zero = (0,) * n
    found.sort(key=lambda z: (z != zero, snake_key(z)))
    _LOG.debug(f"Digit set of size {q}: {found}.")
    return DigitSet(lattice, scheme, tuple(found))


def _fundamental_steps(a: Region, lattice: Lattice) -> RationalVector:
    if a.frame != lattice.frame:
        raise FrameMismatch()
    return lattice.steps


def reduce_mod_lattice(a: Region, lattice: Lattice) -> Region:
    """The image of `a` in the fundamental box of a rectangular lattice.

    Every cell is chopped along the lattice grid and each piece translated
    into ``[0, s)``. Overlapping pieces are merged, so the lost volume is
    reported by :func:`overlap_volume`.

    Raises
    ------
    FrameMismatch
        Different frames.
    LatticeIncompatible
        The lattice is not rectangular in the region's frame.
    """

    s = _fundamental_steps(a, lattice)
    pieces: list[Box] = []
    for cell in a.cells:
        per_axis = []
        for lo, hi, step in zip(cell.lo, cell.hi, s):
            k0 = math.floor(lo / step)
            k1 = math.ceil(hi / step)
            chunks = []
            for k in range(k0, k1):
                p, q = max(lo, k * step), min(hi, (k + 1) * step)
                if p < q:
                    chunks.append((p - k * step, q - k * step))
            per_axis.append(chunks)
        for combo in itertools.product(*per_axis):
            pieces.append(
                Box(tuple(p[0] for p in combo), tuple(p[1] for p in combo))
            )
    return Region.from_boxes(a.frame, pieces)


def overlap_volume(a: Region, lattice: Lattice) -> Fraction:
    """Frame volume of `a` counted more than once modulo the lattice."""

    return a.exact_volume - reduce_mod_lattice(a, lattice).exact_volume


@dataclass(frozen=True)
class TileReport:
    """Outcome of a translation tiling check."""

    is_tile: bool
    overlap_volume: float
    """Ambient volume covered more than once modulo the lattice."""
    gap_volume: float
    """Ambient volume of the fundamental domain left uncovered."""
    defect_cells: tuple[Box, ...]
    """The uncovered part of the fundamental box, in frame coordinates."""

    @property
    def defect(self) -> float:
        return self.overlap_volume + self.gap_volume


def is_translation_tile(a: Region, lattice: Lattice) -> TileReport:
    """Decide exactly whether ``{a + t : t in T}`` tiles space."""

    image = reduce_mod_lattice(a, lattice)
    gap = region_subtract(lattice.fundamental_box(), image)
    overlap = a.exact_volume - image.exact_volume
    scale = a.frame.det_abs
    return TileReport(
        is_tile=overlap == 0 and gap.is_empty,
        overlap_volume=float(overlap) * scale,
        gap_volume=region_volume(gap),
        defect_cells=gap.cells,
    )


def gram_max_offdiag(
    a: Region, spectrum: Lattice, cutoff_radius: float = 5.0
) -> float:
    """Largest normalized off-diagonal Gram entry of ``{e_gamma}`` on `a`.

    For ``gamma != gamma'`` with norms at most `cutoff_radius` this is
    ``|FA(gamma - gamma')| / |a|``; it vanishes when the exponentials are
    orthogonal on `a`.
    """

    if a.is_empty:
        return 0.0
    idx, _ = spectrum.points(cutoff_radius)
    diffs = (idx[:, None, :] - idx[None, :, :]).reshape(-1, spectrum.dim)
    diffs = np.unique(diffs, axis=0)
    diffs = diffs[np.any(diffs != 0, axis=1)]
    if diffs.size == 0:
        return 0.0
    deltas = diffs @ spectrum.ambient_generator.T
    values = np.abs(fourier_indicator(a, deltas))
    return float(values.max() / region_volume(a))

