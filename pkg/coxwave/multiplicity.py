"""Monte Carlo checks that a family of sets tiles space multiplicatively.

A family is a list of ``(d, S)`` pairs. The multiplicity of a point x is
the number of pairs with ``d^-1 x`` in S; for a wavelet set the family is
``{(w B^k, Omega)}`` and the multiplicity should be one almost everywhere.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence, Union

import numpy as np
import numpy.typing as npt

from . import defaults
from .exceptions import EmptyWindow, FrameMismatch, UnsupportedParameter
from .groups import MatrixGroup
from .lattice import DilationScheme
from .region import Region
from .workers import BlockPool

__all__ = (
    "PointSet",
    "Window",
    "Annulus",
    "RegionWindow",
    "MultiplicityReport",
    "multiplicative_multiplicity",
    "dilation_family",
    "dilation_multiplicity",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]
IntArray = npt.NDArray[np.int64]


class PointSet(Protocol):
    def mask(
        self, points: npt.ArrayLike, eps: float = ...
    ) -> tuple[BoolArray, BoolArray]:
        ...


class Window(Protocol):
    @property
    def dim(self) -> int:
        ...

    @property
    def volume(self) -> float:
        ...

    def sample(self, rng: np.random.Generator, n: int) -> FloatArray:
        ...


@dataclass(frozen=True)
class Annulus:
    """``{x : r_lo <= |x| < r_hi}``, sampled uniformly by area."""

    dim: int
    r_lo: float
    r_hi: float

    @property
    def volume(self) -> float:
        ball = math.pi ** (self.dim / 2) / math.gamma(self.dim / 2 + 1)
        inner = max(self.r_lo, 0.0) ** self.dim
        return ball * (self.r_hi**self.dim - inner)

    def sample(self, rng: np.random.Generator, n: int) -> FloatArray:
        directions = rng.standard_normal((n, self.dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        d = self.dim
        lo, hi = max(self.r_lo, 0.0) ** d, self.r_hi**d
        radii = (lo + rng.random(n) * (hi - lo)) ** (1.0 / d)
        return np.asarray(directions * radii[:, None])


@dataclass(frozen=True)
class RegionWindow:
    """Uniform samples from a region, cell chosen by volume."""

    region: Region

    @property
    def dim(self) -> int:
        return self.region.dim

    @property
    def volume(self) -> float:
        return float(self.region.exact_volume) * self.region.frame.det_abs

    def sample(self, rng: np.random.Generator, n: int) -> FloatArray:
        cells = self.region.cells
        weights = np.array([float(c.volume) for c in cells])
        pick = rng.choice(len(cells), size=n, p=weights / weights.sum())
        lo = np.array([[float(x) for x in c.lo] for c in cells])[pick]
        hi = np.array([[float(x) for x in c.hi] for c in cells])[pick]
        t = lo + rng.random((n, self.dim)) * (hi - lo)
        return self.region.frame.to_ambient(t)


def _as_window(window: Union[Window, Region]) -> Window:
    w: Window = (
        RegionWindow(window) if isinstance(window, Region) else window
    )
    if w.volume <= 0.0:
        raise EmptyWindow()
    return w


@dataclass(frozen=True)
class MultiplicityReport:
    """Sampled multiplicity histogram.

    Fractions are of all samples; samples within eps of a face are left
    out of the histogram and counted in `boundary_fraction`.
    """

    histogram: dict[int, float]
    boundary_fraction: float
    n_samples: int
    seed: int

    def fraction(self, k: int) -> float:
        return self.histogram.get(k, 0.0)

    @property
    def worst_multiplicity(self) -> int:
        return max(self.histogram, default=0)


def _check_samples(n_samples: int) -> None:
    if n_samples < 1:
        raise UnsupportedParameter("n_samples", n_samples)


def _report(
    blocks: Sequence[tuple[IntArray, BoolArray]], n: int, seed: int
) -> MultiplicityReport:
    counter: Counter[int] = Counter()
    n_boundary = 0
    for counts, boundary in blocks:
        counter.update(counts[~boundary].tolist())
        n_boundary += int(boundary.sum())
    hist = {int(k): v / n for k, v in sorted(counter.items())}
    return MultiplicityReport(hist, n_boundary / n, n, seed)


def multiplicative_multiplicity(
    family: Sequence[tuple[npt.ArrayLike, PointSet]],
    window: Union[Window, Region],
    n_samples: int = defaults.DEFAULT_SAMPLES,
    seed: int = defaults.DEFAULT_SEED,
    eps: float = defaults.EPS_GEOM,
    pool: BlockPool | None = None,
) -> MultiplicityReport:
    """Histogram of ``#{(d, S) : d^-1 x in S}`` over a window.

    Raises
    ------
    EmptyWindow
        The window has zero volume.
    UnsupportedParameter
        ``n_samples`` is below one.
    """

    _check_samples(n_samples)
    win = _as_window(window)
    members = [
        (np.linalg.inv(np.asarray(d, dtype=float)), s) for d, s in family
    ]

    def block(
        size: int, rng: np.random.Generator
    ) -> tuple[IntArray, BoolArray]:
        pts = win.sample(rng, size)
        counts = np.zeros(size, dtype=np.int64)
        boundary = np.zeros(size, dtype=bool)
        for inv, s in members:
            inside, near = s.mask(pts @ inv.T, eps)
            counts += inside
            boundary |= near
        return counts, boundary

    blocks = (pool or BlockPool()).run(
        block, seed, n_samples, defaults.BLOCK_SIZE
    )
    return _report(blocks, n_samples, seed)


def dilation_family(
    regions: Sequence[Region],
    group: MatrixGroup,
    scheme: DilationScheme,
    k_max: int = defaults.K_MAX,
) -> list[tuple[FloatArray, PointSet]]:
    """``{(w B^k, Omega)}`` for every element, power and region."""

    return [
        (w @ scheme.ambient(k), r)
        for r in regions
        for w in group
        for k in range(-k_max, k_max + 1)
    ]


def _axis_interval(
    t: FloatArray, lo: float, hi: float, log_a: float
) -> tuple[FloatArray, FloatArray]:
    """Real k with ``lo <= t a^-k < hi`` as an interval ``[L, U]``."""

    inf = np.inf
    at = np.abs(t)
    none = np.full_like(t, inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower_pos = np.log(at / hi) / log_a if hi > 0 else none
        upper_pos = np.log(at / lo) / log_a if lo > 0 else none
        lower_neg = np.log(at / -lo) / log_a if lo < 0 else none
        upper_neg = np.log(at / -hi) / log_a if hi < 0 else none
    zero_lower = -inf if lo <= 0 < hi else inf
    lower = np.where(
        t > 0, lower_pos, np.where(t < 0, lower_neg, zero_lower)
    )
    upper = np.where(t > 0, upper_pos, np.where(t < 0, upper_neg, inf))
    return lower, upper


def _diagonal_counts(
    pts: FloatArray,
    regions: Sequence[Region],
    group: MatrixGroup,
    log_a: FloatArray,
    k_max: int,
    eps: float,
) -> tuple[IntArray, BoolArray]:
    n = pts.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    boundary = np.zeros(n, dtype=bool)
    frame = regions[0].frame
    edge = k_max + 0.5
    with np.errstate(invalid="ignore"):
        for w in group:
            t = frame.to_frame(pts @ w)
            _accumulate(t, regions, log_a, edge, eps, counts, boundary)
    return counts, boundary


def _accumulate(
    t: FloatArray,
    regions: Sequence[Region],
    log_a: FloatArray,
    edge: float,
    eps: float,
    counts: IntArray,
    boundary: BoolArray,
) -> None:
    n, dim = t.shape
    scale = np.linalg.norm(t, axis=1)
    for region in regions:
        for cell in region.cells:
            lower = np.full(n, -edge)
            upper = np.full(n, edge)
            for j in range(dim):
                lo, hi = float(cell.lo[j]), float(cell.hi[j])
                a_lo, a_up = _axis_interval(t[:, j], lo, hi, log_a[j])
                lower = np.maximum(lower, a_lo)
                upper = np.minimum(upper, a_up)
                if lo == 0.0 or hi == 0.0:
                    boundary |= np.abs(t[:, j]) <= eps * scale
            hits = np.floor(upper) - np.ceil(lower) + 1
            counts += np.maximum(hits, 0).astype(np.int64)
            live = upper >= lower - eps
            near = (np.abs(lower - np.round(lower)) < eps) | (
                np.abs(upper - np.round(upper)) < eps
            )
            boundary |= live & near


def dilation_multiplicity(
    regions: Sequence[Region],
    group: MatrixGroup,
    scheme: DilationScheme,
    window: Union[Window, Region],
    k_max: int = defaults.K_MAX,
    n_samples: int = defaults.DEFAULT_SAMPLES,
    seed: int = defaults.DEFAULT_SEED,
    eps: float = defaults.EPS_GEOM,
    pool: BlockPool | None = None,
) -> MultiplicityReport:
    """Multiplicity of ``{w B^k Omega_i : w, |k| <= k_max, i}``.

    When ``B`` is diagonal with scales above one in the regions' frame the
    admissible powers of each cell are solved for directly, which costs
    nothing per power; any other scheme goes through
    :func:`multiplicative_multiplicity` with the explicit family.

    Raises
    ------
    FrameMismatch
        The regions do not share a frame.
    EmptyWindow
        The window has zero volume.
    UnsupportedParameter
        ``n_samples`` is below one.
    """

    _check_samples(n_samples)
    if any(r.frame != regions[0].frame for r in regions):
        raise FrameMismatch()
    fast = (
        scheme.frame == regions[0].frame
        and scheme.is_diagonal
        and all(a > 1 for a in scheme.scales)
    )
    if not fast:
        _LOG.debug("Dilation family is not frame-diagonal; enumerating it.")
        family = dilation_family(regions, group, scheme, k_max)
        return multiplicative_multiplicity(
            family, window, n_samples, seed, eps, pool
        )

    win = _as_window(window)
    log_a = np.log(np.array([float(a) for a in scheme.scales]))

    def block(
        size: int, rng: np.random.Generator
    ) -> tuple[IntArray, BoolArray]:
        pts = win.sample(rng, size)
        return _diagonal_counts(pts, regions, group, log_a, k_max, eps)

    blocks = (pool or BlockPool()).run(
        block, seed, n_samples, defaults.BLOCK_SIZE
    )
    return _report(blocks, n_samples, seed)
