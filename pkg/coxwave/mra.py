"""Scaling sets, their dilation ladders and the multiwavelet sets they split
into.

A scaling set K for a lattice T and a dilation B satisfies
``B^-1 K`` inside K and tiles by T. The pieces ``K_i`` cut out by the digits
``v_i`` give the multiwavelet sets ``Omega_i = B K_i``, ``i = 1..q-1``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import defaults
from .exceptions import FrameMismatch, SearchRadiusExceeded
from .lattice import (
    DigitSet,
    DilationScheme,
    Lattice,
    TileReport,
    digit_representatives,
    gram_max_offdiag,
    is_translation_tile,
    reduce_mod_lattice,
)
from .rational import RationalLike, RationalVector, vector
from .region import (
    Box,
    Frame,
    Region,
    region_intersect,
    region_scale_diag,
    region_subtract,
    region_translate,
    region_union,
    same_set,
)
from .roots import DualBasis

__all__ = (
    "ScalingBoxSpec",
    "ScalingReport",
    "MRALadder",
    "MRAChecks",
    "MRAConstruction",
    "standard_scaling_box",
    "is_scaling_set",
    "ladder_nested",
    "split_scaling_set",
    "multiwavelet_sets",
    "construct_mra",
    "check_mra",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)


@dataclass(frozen=True)
class ScalingBoxSpec:
    """Side lengths of the box ``{sum t_j alpha_j* : 0 <= t_j < s_j}``."""

    s: RationalVector

    def __post_init__(self) -> None:
        s = vector(self.s)
        if any(x <= 0 for x in s):
            raise ValueError(f"box sides must be positive, got {s}")
        object.__setattr__(self, "s", s)

    @classmethod
    def unit(cls, dim: int) -> ScalingBoxSpec:
        return cls((Fraction(1),) * dim)


def standard_scaling_box(
    dual: DualBasis | Frame, spec: ScalingBoxSpec
) -> Region:
    """The box P(s) in the frame of the dual basis."""

    frame = dual.frame() if isinstance(dual, DualBasis) else dual
    if frame.dim != len(spec.s):
        raise ValueError("box sides and frame dimensions differ")
    zero = (Fraction(0),) * frame.dim
    return Region(frame, (Box(zero, spec.s),))


@dataclass(frozen=True)
class ScalingReport:
    """Result of :func:`is_scaling_set`. Truthy when both parts hold."""

    contained: bool
    """``B^-1 K`` is a subset of K."""
    tile: TileReport
    excess_volume: float
    """Ambient volume of ``B^-1 K`` outside K."""

    def __bool__(self) -> bool:
        return self.contained and self.tile.is_tile


def _check_frames(k: Region, scheme: DilationScheme, t: Lattice) -> None:
    if k.frame != scheme.frame or k.frame != t.frame:
        raise FrameMismatch()


def is_scaling_set(
    k: Region, scheme: DilationScheme, t: Lattice
) -> ScalingReport:
    """Check ``B^-1 K`` inside K and that K tiles by T, both exactly.

    Raises
    ------
    FrameMismatch
        K, B and T are not written in one frame.
    UnsupportedTransform
        B is not diagonal in that frame.
    """

    _check_frames(k, scheme, t)
    shrunk = region_scale_diag(k, scheme.scale_factors(-1))
    excess = region_subtract(shrunk, k)
    return ScalingReport(
        contained=excess.is_empty,
        tile=is_translation_tile(k, t),
        excess_volume=float(excess.exact_volume) * k.frame.det_abs,
    )


@dataclass(frozen=True)
class MRALadder:
    """The nested subspaces ``V_j`` given by the sets ``B^j K``."""

    k: Region
    scheme: DilationScheme
    lattice: Lattice

    def level(self, j: int) -> Region:
        """``B^j K``: the spectrum of ``V_j``."""

        return region_scale_diag(self.k, self.scheme.scale_factors(j))


def ladder_nested(ladder: MRALadder, j_lo: int, j_hi: int) -> bool:
    """Exact check of ``B^j K`` inside ``B^(j+1) K`` and of
    ``|B^j K| = q^j |K|`` for ``j_lo <= j <= j_hi``."""

    q = ladder.scheme.q
    vol = ladder.k.exact_volume
    levels = {j: ladder.level(j) for j in range(j_lo, j_hi + 2)}
    return all(
        region_subtract(levels[j], levels[j + 1]).is_empty
        and levels[j].exact_volume == vol * q**j
        for j in range(j_lo, j_hi + 1)
    )


def _translate_range(
    piece: Region, target: Region, steps: RationalVector, limit: int
) -> list[tuple[int, ...]]:
    plo, phi = piece.bounds()
    klo, khi = target.bounds()
    axes = []
    for j, s in enumerate(steps):
        lo = math.floor((klo[j] - phi[j]) / s)
        hi = math.ceil((khi[j] - plo[j]) / s)
        axes.append(range(lo, hi + 1))
    count = math.prod(len(a) for a in axes)
    if count > limit:
        raise SearchRadiusExceeded(count, limit)
    return list(itertools.product(*axes))


def split_scaling_set(
    k: Region,
    scheme: DilationScheme,
    digits: DigitSet,
    max_translates: int = defaults.MAX_TRANSLATES,
) -> tuple[Region, ...]:
    """``K_i = (B^-1 K + B^-1 v_i + T) intersected with K``.

    The pieces partition K, one per digit, in digit order.

    Raises
    ------
    SearchRadiusExceeded
        More than `max_translates` lattice vectors would be examined.
    """

    t = digits.lattice
    _check_frames(k, scheme, t)
    inv = scheme.scale_factors(-1)
    base = region_scale_diag(k, inv)
    steps = t.steps
    pieces = []
    for v in digits.digits:
        shifted = region_translate(base, [a * x for a, x in zip(inv, v)])
        piece = Region.empty(k.frame)
        for n in _translate_range(shifted, k, steps, max_translates):
            moved = region_translate(
                shifted, [s * m for s, m in zip(steps, n)]
            )
            piece = region_union(piece, region_intersect(moved, k))
        pieces.append(piece)
    return tuple(pieces)


def multiwavelet_sets(
    k: Region,
    scheme: DilationScheme,
    digits: DigitSet,
    splits: Sequence[Region] | None = None,
) -> tuple[Region, ...]:
    """``Omega_i = B K_i`` for ``i = 1..q-1``."""

    parts = (
        splits
        if splits is not None
        else split_scaling_set(k, scheme, digits)
    )
    factors = scheme.scale_factors(1)
    return tuple(region_scale_diag(p, factors) for p in parts[1:])


@dataclass(frozen=True)
class MRAChecks:
    """Exact structural checks and the sampled Gram bound."""

    partition: bool
    """The ``K_i`` are disjoint and cover K."""
    congruence: bool
    """Every ``Omega_i`` is T-congruent to K."""
    refinement: bool
    """``B K`` is the disjoint union of K and the ``Omega_i``."""
    gram: float
    """Worst off-diagonal Gram entry over the ``Omega_i``."""

    @property
    def passed(self) -> bool:
        return self.partition and self.congruence and self.refinement


@dataclass(frozen=True)
class MRAConstruction:
    """Everything produced by :func:`construct_mra`."""

    k: Region
    scheme: DilationScheme
    lattice: Lattice
    digits: DigitSet
    splits: tuple[Region, ...]
    wavelet_sets: tuple[Region, ...]

    @property
    def ladder(self) -> MRALadder:
        return MRALadder(self.k, self.scheme, self.lattice)


def construct_mra(
    dual: DualBasis | Frame,
    sides: ScalingBoxSpec,
    scales: Sequence[RationalLike],
    lattice_steps: Sequence[RationalLike] | None = None,
) -> MRAConstruction:
    """Build the box scaling set, its digits, splits and wavelet sets.

    Parameters
    ----------
    dual : DualBasis | Frame
        The frame of the chamber's dual basis.
    sides : ScalingBoxSpec
        Side lengths of the scaling box.
    scales : Sequence[RationalLike]
        The diagonal of B in the frame.
    lattice_steps : Sequence[RationalLike], optional
        Steps of the rectangular lattice T, by default the box sides.
    """

    k = standard_scaling_box(dual, sides)
    frame = k.frame
    scheme = DilationScheme.diagonal(frame, scales)
    lattice = Lattice.rectangular(
        frame, lattice_steps if lattice_steps is not None else sides.s
    )
    digits = digit_representatives(scheme, lattice)
    splits = split_scaling_set(k, scheme, digits)
    omegas = multiwavelet_sets(k, scheme, digits, splits)
    _LOG.info(
        f"Built {len(omegas)} multiwavelet sets from a scaling box with "
        f"sides {[str(x) for x in sides.s]}."
    )
    return MRAConstruction(k, scheme, lattice, digits, splits, omegas)


def check_mra(
    mra: MRAConstruction, gram_radius: float = 5.0
) -> MRAChecks:
    """Run the exact partition, congruence and refinement checks."""

    k = mra.k
    union = Region.empty(k.frame)
    disjoint = True
    for piece in mra.splits:
        if not region_intersect(union, piece).is_empty:
            disjoint = False
        union = region_union(union, piece)
    partition = disjoint and same_set(union, k)

    reduced_k = reduce_mod_lattice(k, mra.lattice)
    congruence = all(
        same_set(reduce_mod_lattice(o, mra.lattice), reduced_k)
        and o.exact_volume == k.exact_volume
        for o in mra.wavelet_sets
    )

    bk = mra.ladder.level(1)
    covered = k
    refinement = True
    for o in mra.wavelet_sets:
        if not region_intersect(covered, o).is_empty:
            refinement = False
        covered = region_union(covered, o)
    refinement = refinement and same_set(covered, bk)

    spectrum = mra.lattice.dual()
    gram = max(
        (gram_max_offdiag(o, spectrum, gram_radius) for o in mra.wavelet_sets),
        default=0.0,
    )
    return MRAChecks(partition, congruence, refinement, gram)
