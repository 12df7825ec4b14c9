"""Iterative wavelet set constructions and their verification.

Two recursions are provided. :func:`construct_section5` grows a wavelet set
inside a chamber from a scaling box P and a frame-diagonal dilation B;
:func:`construct_example31` builds the planar set for the dilations
``a^k R_{2 pi j / m}``. Both are truncated at a depth N and carry the
volume still missing from the limit set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import defaults
from .exceptions import (
    FrameMismatch,
    NonExpansive,
    UnsupportedParameter,
)
from .groups import Cone, MatrixGroup
from .lattice import (
    DilationScheme,
    Lattice,
    TileReport,
    gram_max_offdiag,
    is_translation_tile,
)
from .multiplicity import (
    Annulus,
    FloatArray,
    MultiplicityReport,
    Window,
    dilation_multiplicity,
)
from .rational import RationalLike, RationalVector, as_fraction
from .region import (
    Box,
    Frame,
    Region,
    region_intersect,
    region_scale_diag,
    region_subtract,
    region_translate,
    region_union,
    region_volume,
)
from .workers import BlockPool

__all__ = (
    "RecursionState",
    "IdentityReport",
    "DilationTileReport",
    "WaveletVerdict",
    "WedgeRegion",
    "ConeWindow",
    "construct_section5",
    "construct_example31",
    "section5_identities",
    "dilation_tile_report",
    "verify_wavelet_set",
    "wedge_region",
    "example31_base",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

STAIRCASE_STEP = Fraction(1, 64)
"""Resolution of staircase approximations of wedge pieces."""

TAN_DENOMINATOR = 10**6
"""Largest denominator of the rational stand-in for tan(2 pi / m)."""


@dataclass(frozen=True, eq=False)
class RecursionState:
    """A truncated wavelet set and the pieces it is made of.

    `first` holds ``W_{1,1..N}`` (or ``Omega_{1,1..N}``), `second` holds
    ``W_{2,1..N}`` (or ``Omega_{2,1..N}``).
    """

    method: str
    """"section5" or "example31"."""
    depth: int
    first: tuple[Region, ...]
    second: tuple[Region, ...]
    base: Region
    """P for the chamber recursion, E for the planar one."""
    f_region: Region
    """The set F the second pieces are cut from."""
    translation: RationalVector
    """The translation moving the first pieces out of the base, in frame
    coordinates."""
    scheme: DilationScheme
    union: Region
    """The truncated wavelet set ``W_N``."""
    notes: tuple[str, ...] = field(default=())

    @property
    def frame(self) -> Frame:
        return self.base.frame

    @property
    def residual_volume(self) -> float:
        """``|base| - |W_N|`` in ambient units."""

        missing = self.base.exact_volume - self.union.exact_volume
        return float(missing) * self.frame.det_abs

    def pieces(self) -> list[Region]:
        out = []
        for a, b in zip(self.first, self.second):
            out.extend((a, b))
        return out

    def pieces_disjoint(self) -> bool:
        """Exact pairwise disjointness of all pieces."""

        seen = Region.empty(self.frame)
        for piece in self.pieces():
            if not region_intersect(seen, piece).is_empty:
                return False
            seen = region_union(seen, piece)
        return True


def _scaled(region: Region, scheme: DilationScheme, k: int) -> Region:
    return region_scale_diag(region, scheme.scale_factors(k))


def _union_all(frame: Frame, regions: list[Region]) -> Region:
    out = Region.empty(frame)
    for r in regions:
        out = region_union(out, r)
    return out


def construct_section5(
    p: Region,
    scheme: DilationScheme,
    alpha_star_index: int = 1,
    depth: int = defaults.DEFAULT_DEPTH,
) -> RecursionState:
    """Run the chamber recursion from a scaling box P.

    ``F = BP \\ P``, ``W_{1,1} = (P \\ B^-1 P) + alpha``,
    ``W_{2,1} = B^-2 [F \\ (P + alpha)]`` and for ``n >= 2``
    ``W_{1,n} = [(B^-n+1 P \\ B^-n P) \\ W_{2,n-1}] + alpha``,
    ``W_{2,n} = B^-n-1 [((B^-n+1 P \\ B^-n P) + alpha) \\ W_{1,n}]``.

    `alpha` is the lattice step of P along the dual vector with index
    `alpha_star_index` (1-based), which is ``alpha_i*`` itself for a unit box.

    Raises
    ------
    FrameMismatch
        P and B use different frames.
    UnsupportedTransform
        B is not diagonal in the frame.
    UnsupportedParameter
        The depth or index is out of range.
    """

    if p.frame != scheme.frame:
        raise FrameMismatch()
    scales = scheme.scales
    if any(a <= 1 for a in scales):
        raise NonExpansive([float(a) for a in scales])
    if depth < 1:
        raise UnsupportedParameter("depth", depth)
    if not 1 <= alpha_star_index <= p.dim:
        raise UnsupportedParameter("alpha_star_index", alpha_star_index)

    lo, hi = p.bounds()
    i = alpha_star_index - 1
    alpha = tuple(
        hi[j] - lo[j] if j == i else Fraction(0) for j in range(p.dim)
    )

    f = region_subtract(_scaled(p, scheme, 1), p)
    first = [
        region_translate(region_subtract(p, _scaled(p, scheme, -1)), alpha)
    ]
    second = [
        _scaled(region_subtract(f, region_translate(p, alpha)), scheme, -2)
    ]
    for n in range(2, depth + 1):
        ann = region_subtract(
            _scaled(p, scheme, 1 - n), _scaled(p, scheme, -n)
        )
        w1 = region_translate(region_subtract(ann, second[-1]), alpha)
        w2 = _scaled(
            region_subtract(region_translate(ann, alpha), w1),
            scheme,
            -n - 1,
        )
        first.append(w1)
        second.append(w2)
        _LOG.debug(f"Chamber recursion reached depth {n}.")

    union = _union_all(
        p.frame, [r for pair in zip(first, second) for r in pair]
    )
    state = RecursionState(
        "section5",
        depth,
        tuple(first),
        tuple(second),
        p,
        f,
        alpha,
        scheme,
        union,
    )
    _LOG.info(
        f"Chamber recursion at depth {depth}: residual volume "
        f"{state.residual_volume:.3e}."
    )
    return state


@dataclass(frozen=True)
class WedgeRegion:
    """The closed wedge ``0 <= angle <= 2 pi / m`` and, for m >= 5, a
    staircase of boxes approximating its part between two radii."""

    m: int
    cone: Cone
    staircase: Region | None

    def contains(self, x: tuple[float, float]) -> bool:
        return self.cone.contains(np.asarray(x, dtype=float), eps=0.0)


def _wedge_cone(m: int) -> Cone:
    theta = 2 * math.pi / m
    if m == 2:
        return Cone(np.array([[0.0, 1.0]]))
    return Cone(
        np.array([[0.0, 1.0], [math.sin(theta), -math.cos(theta)]])
    )


def wedge_region(
    m: int,
    r_lo: RationalLike = 0,
    r_hi: RationalLike = 1,
    h: RationalLike = STAIRCASE_STEP,
) -> WedgeRegion:
    """The wedge of opening ``2 pi / m``.

    The staircase keeps the ``h``-grid squares whose centres lie in the
    wedge at radius in ``[r_lo, r_hi)``; each column is one box.
    """

    if m < 2:
        raise UnsupportedParameter("m", m)
    cone = _wedge_cone(m)
    if m < 5:
        return WedgeRegion(m, cone, None)

    step = as_fraction(h)
    lo_r, hi_r = float(r_lo), float(r_hi)
    n = math.ceil(as_fraction(r_hi) / step)
    tan = math.tan(2 * math.pi / m)
    cells = []
    for k in range(n):
        x = float((k + Fraction(1, 2)) * step)
        centres = (np.arange(n) + 0.5) * float(step)
        radius = np.hypot(x, centres)
        ok = (centres <= x * tan) & (radius >= lo_r) & (radius < hi_r)
        rows = np.flatnonzero(ok)
        if rows.size:
            cells.append(
                Box(
                    (k * step, int(rows[0]) * step),
                    ((k + 1) * step, (int(rows[-1]) + 1) * step),
                )
            )
    return WedgeRegion(m, cone, Region(Frame.identity(2), tuple(cells)))


def example31_base(
    a: RationalLike, m: int, h: RationalLike = STAIRCASE_STEP
) -> tuple[Region, Region, tuple[str, ...]]:
    """The sets E and F for the planar recursion, with deviation notes."""

    frame = Frame.identity(2)
    av = as_fraction(a)
    notes: list[str] = []
    if m == 4:
        e = Region.box(frame, (0, 0), (1, 1))
    elif m == 2:
        e = Region.box(frame, (-1, 0), (1, 1))
    else:
        tan = Fraction(math.tan(2 * math.pi / m)).limit_denominator(
            TAN_DENOMINATOR
        )
        e = Region.box(frame, (0, 0), (1, tan))
        notes.append(f"tan(2pi/{m}) replaced by {tan}")

    if m in (2, 4):
        f = region_subtract(region_scale_diag(e, (av, av)), e)
        notes.append("F replaced by aE minus E")
        _LOG.warning(
            f"Unbounded F for m = {m} replaced by aE minus E; the "
            "deviation is recorded in the scene."
        )
    else:
        step = as_fraction(h)
        tan = e.cells[0].hi[1]
        cells = []
        x = Fraction(1)
        while x < av:
            nxt = min(x + step, av)
            cells.append(Box((x, Fraction(0)), (nxt, x * tan)))
            x = nxt
        f = Region(frame, tuple(cells))
        notes.append(f"F approximated by a staircase with step {step}")
    return e, f, tuple(notes)


def construct_example31(
    a: RationalLike,
    m: int,
    depth: int = defaults.DEFAULT_DEPTH,
    h: RationalLike = STAIRCASE_STEP,
) -> RecursionState:
    """Run the planar recursion for the dilations ``a^k R_{2 pi j / m}``.

    ``Omega_{1,1} = (E \\ a^-1 E) + (1, 0)``,
    ``Omega_{2,1} = a^-2 (F \\ (E + (0, 1)))`` and for ``j >= 2``
    ``Omega_{1,j} = [(a^-j+1 E \\ a^-j E) \\ Omega_{2,j-1}] + (1, 0)``,
    ``Omega_{2,j} = a^-j-1 [Omega_{2,j-1} + (0, 1)]``.

    Raises
    ------
    UnsupportedParameter
        ``m`` is 3 or below 2, or the depth is below 2.
    NonExpansive
        ``a <= 1``.
    """

    av = as_fraction(a)
    if m < 2 or m == 3:
        raise UnsupportedParameter("m", m)
    if av <= 1:
        raise NonExpansive([float(av)])
    if depth < 2:
        raise UnsupportedParameter("depth", depth)

    e, f, notes = example31_base(av, m, h)
    scheme = DilationScheme.diagonal(e.frame, (av, av))
    right = (Fraction(1), Fraction(0))
    up = (Fraction(0), Fraction(1))

    first = [
        region_translate(region_subtract(e, _scaled(e, scheme, -1)), right)
    ]
    second = [
        _scaled(region_subtract(f, region_translate(e, up)), scheme, -2)
    ]
    for j in range(2, depth + 1):
        ann = region_subtract(
            _scaled(e, scheme, 1 - j), _scaled(e, scheme, -j)
        )
        first.append(
            region_translate(region_subtract(ann, second[-1]), right)
        )
        second.append(
            _scaled(region_translate(second[-1], up), scheme, -j - 1)
        )

    union = _union_all(
        e.frame, [r for pair in zip(first, second) for r in pair]
    )
    state = RecursionState(
        "example31",
        depth,
        tuple(first),
        tuple(second),
        e,
        f,
        right,
        scheme,
        union,
        notes,
    )
    _LOG.info(
        f"Planar recursion (a={av}, m={m}) at depth {depth}: residual "
        f"volume {state.residual_volume:.3e}."
    )
    return state


@dataclass(frozen=True)
class IdentityReport:
    """Exact defects of the two decomposition identities of the chamber
    recursion, in ambient units."""

    p_missing: float
    """Volume of P not covered by the second pieces and the shifted first
    pieces."""
    p_excess: float
    f_missing: float
    """Volume of F not covered by the redilated pieces."""
    f_excess: float

    @property
    def holds(self) -> bool:
        return self.p_excess == 0.0 and self.f_excess == 0.0


def section5_identities(state: RecursionState) -> IdentityReport:
    """Check the two decompositions behind the chamber recursion.

    P is covered by the ``W_{2,n}`` and the ``W_{1,n} - alpha``; F is
    covered by ``W_{1,1}``, ``B^2 W_{2,1}`` and ``W_{1,n} u B^(n+1) W_{2,n}``
    for ``n >= 2``. At a finite depth both covers miss a residual near the
    origin and must not spill outside.
    """

    back = tuple(-x for x in state.translation)
    p_parts = [region_translate(w, back) for w in state.first]
    p_parts += list(state.second)
    p_cover = _union_all(state.frame, p_parts)

    f_parts = [state.first[0], _scaled(state.second[0], state.scheme, 2)]
    for n in range(2, state.depth + 1):
        f_parts.append(state.first[n - 1])
        f_parts.append(_scaled(state.second[n - 1], state.scheme, n + 1))
    f_cover = _union_all(state.frame, f_parts)

    return IdentityReport(
        p_missing=region_volume(region_subtract(state.base, p_cover)),
        p_excess=region_volume(region_subtract(p_cover, state.base)),
        f_missing=region_volume(region_subtract(state.f_region, f_cover)),
        f_excess=region_volume(region_subtract(f_cover, state.f_region)),
    )


@dataclass(frozen=True)
class ConeWindow:
    """An annulus restricted to a cone, sampled by rejection."""

    annulus: Annulus
    cone: Cone

    @property
    def dim(self) -> int:
        return self.annulus.dim

    @property
    def volume(self) -> float:
        return self.annulus.volume

    def sample(self, rng: np.random.Generator, n: int) -> FloatArray:
        out: list[FloatArray] = []
        have = 0
        while have < n:
            pts = self.annulus.sample(rng, 2 * (n - have) + 16)
            inside, _ = self.cone.mask(pts)
            keep = pts[inside][: n - have]
            out.append(keep)
            have += len(keep)
        return np.concatenate(out)


@dataclass(frozen=True)
class DilationTileReport:
    """How well ``{B^k F}`` tiles the cone it lives in."""

    disjoint: bool
    """``F`` and ``BF`` do not meet (exact)."""
    coverage: MultiplicityReport
    """Sampled multiplicity over the cone."""


def frame_cone(frame: Frame) -> Cone:
    """The cone spanned by the frame vectors."""

    return Cone(frame.inverse)


def dilation_tile_report(
    f: Region,
    scheme: DilationScheme,
    cone: Cone | None = None,
    window: Annulus | None = None,
    n_samples: int = defaults.DEFAULT_SAMPLES,
    seed: int = defaults.DEFAULT_SEED,
    k_max: int = defaults.K_MAX,
    pool: BlockPool | None = None,
) -> DilationTileReport:
    """Check that the dilates of F tile a cone multiplicatively."""

    if f.frame != scheme.frame:
        raise FrameMismatch()
    bf = _scaled(f, scheme, 1)
    disjoint = region_intersect(f, bf).is_empty
    win = ConeWindow(
        window or Annulus(f.dim, 0.5, 1.5),
        cone if cone is not None else frame_cone(f.frame),
    )
    coverage = dilation_multiplicity(
        [f],
        MatrixGroup.trivial(f.dim),
        scheme,
        win,
        k_max,
        n_samples,
        seed,
        pool=pool,
    )
    return DilationTileReport(disjoint, coverage)


@dataclass(frozen=True)
class WaveletVerdict:
    """The three checks behind a ``(D, Gamma)`` wavelet set."""

    translation_report: TileReport
    dilation_histogram: MultiplicityReport
    gram_bound: float

    def passed(
        self,
        translation_defect: float,
        multiplicity_one: float,
        gram: float,
    ) -> bool:
        return (
            self.translation_report.defect <= translation_defect
            and self.dilation_histogram.fraction(1) >= multiplicity_one
            and self.gram_bound <= gram
        )


def verify_wavelet_set(
    omega: Region,
    group: MatrixGroup,
    scheme: DilationScheme,
    lattice: Lattice,
    window: Union[Window, Region, None] = None,
    n_samples: int = defaults.DEFAULT_SAMPLES,
    seed: int = defaults.DEFAULT_SEED,
    k_max: int = defaults.K_MAX,
    gram_radius: float = 5.0,
    pool: BlockPool | None = None,
) -> WaveletVerdict:
    """Check translation tiling by the lattice, multiplicative tiling by
    ``{w B^k}`` and the off-diagonal Gram entries on the dual lattice.

    Failures are reported in the verdict, never raised.
    """

    translation = is_translation_tile(omega, lattice)
    histogram = dilation_multiplicity(
        [omega],
        group,
        scheme,
        window if window is not None else Annulus(omega.dim, 0.5, 1.5),
        k_max,
        n_samples,
        seed,
        pool=pool,
    )
    gram = gram_max_offdiag(omega, lattice.dual(), gram_radius)
    _LOG.info(
        f"Wavelet set check: defect {translation.defect:.3e}, "
        f"multiplicity-1 fraction {histogram.fraction(1):.4f}, "
        f"gram {gram:.3e}."
    )
    return WaveletVerdict(translation, histogram, gram)
