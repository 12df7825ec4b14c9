"""Sampling and reconstruction of signals with box spectra.

A :class:`BandlimitedSignal` stores its Fourier transform as a finite sum
``sum c_k chi_{S_k}`` over disjoint boxes, so the signal, its samples, the
reconstruction kernel and the tube-domain extensions are all closed-form.

With ``phi = F^-1 chi_P`` and the spectrum lattice Gamma of P,
``f(x) = |P|^-1 sum_gamma f(-gamma) phi(x + gamma)`` for f band-limited to
P. On level j of a dilation ladder the samples move to ``-L^j Gamma`` and
``f(x) = |P|^-1 sum_gamma f(-L^j gamma) phi((B^j)^T x + gamma)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
import numpy.typing as npt

from . import defaults
from .exceptions import (
    FrameMismatch,
    IncompletePlan,
    NotASpectrum,
    OutsideBand,
    OutsideDualCone,
    StraddlingBox,
)
from .groups import MatrixGroup, chamber_of
from .lattice import DilationScheme, Lattice, gram_max_offdiag
from .region import (
    Box,
    Frame,
    Region,
    fourier_indicator,
    region_scale_diag,
    region_subtract,
    region_volume,
)
from .roots import SimpleSystem

__all__ = (
    "BandlimitedSignal",
    "SamplingPlan",
    "DualCone",
    "ExperimentRow",
    "signal_eval",
    "phi_eval",
    "sample_signal",
    "wsk_reconstruct",
    "wsk_reconstruct_dilated",
    "directional_decompose",
    "dual_cone",
    "eval_tube_extension",
    "grid_energy",
    "random_box_signal",
    "evaluation_grid",
    "run_sampling_experiment",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
Samples = Mapping[tuple[int, ...], complex]

_EVAL_CHUNK = 1 << 18


@dataclass(frozen=True, eq=False)
class BandlimitedSignal:
    """``F f = sum_k c_k chi_{S_k}`` with disjoint boxes S_k.

    Parameters
    ----------
    frame : Frame
        The frame the boxes are written in.
    terms : tuple[tuple[complex, Box], ...]
        Coefficients and spectrum boxes.
    """

    frame: Frame
    terms: tuple[tuple[complex, Box], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "terms", tuple((complex(c), b) for c, b in self.terms)
        )

    @property
    def dim(self) -> int:
        return self.frame.dim

    def spectrum(self) -> Region:
        return Region(self.frame, tuple(b for _, b in self.terms))

    def is_supported_in(self, region: Region) -> bool:
        if region.frame != self.frame:
            raise FrameMismatch()
        return region_subtract(self.spectrum(), region).is_empty

    def norm_squared(self) -> float:
        """``||f||^2`` from the coefficients (Plancherel)."""

        return sum(
            abs(c) ** 2 * float(b.volume) * self.frame.det_abs
            for c, b in self.terms
        )

    def __call__(self, x: npt.ArrayLike) -> ComplexArray:
        return signal_eval(self, x)

    def __add__(self, other: BandlimitedSignal) -> BandlimitedSignal:
        if other.frame != self.frame:
            raise FrameMismatch()
        return BandlimitedSignal(self.frame, self.terms + other.terms)

    def pullback(
        self, scheme: DilationScheme, j: int = 1
    ) -> BandlimitedSignal:
        """``g = f o L^j``, whose spectrum is ``B^-j`` times that of f."""

        if scheme.frame != self.frame:
            raise FrameMismatch()
        factors = scheme.scale_factors(-j)
        jac = float(scheme.q) ** j
        return BandlimitedSignal(
            self.frame,
            tuple((c * jac, b.scale(factors)) for c, b in self.terms),
        )


def signal_eval(f: BandlimitedSignal, x: npt.ArrayLike) -> ComplexArray:
    """``f(x) = sum_k c_k integral over S_k of exp(2 pi i (x, l)) dl``.

    `x` has shape ``(..., dim)``.
    """

    xs = np.asarray(x, dtype=float)
    out = np.zeros(xs.shape[:-1], dtype=complex)
    for c, box in f.terms:
        out += c * fourier_indicator(Region(f.frame, (box,)), -xs)
    return out


def phi_eval(p: Region, x: npt.ArrayLike) -> ComplexArray:
    """The kernel ``phi = F^-1 chi_P`` at `x`."""

    return fourier_indicator(p, -np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """Where to sample and how far to sum.

    Parameters
    ----------
    p : Region
        The spectral support.
    spectrum : Lattice
        A spectrum of P.
    radius : int
        Truncation radius in the sup-norm of lattice coordinates.
    level : int
        The ladder level j.
    scheme : DilationScheme, optional
        Supplies ``B`` and ``L`` when ``level != 0``.
    """

    p: Region
    spectrum: Lattice
    radius: int = defaults.DEFAULT_RADIUS
    level: int = 0
    scheme: DilationScheme | None = None

    def __post_init__(self) -> None:
        if self.level != 0 and self.scheme is None:
            raise ValueError("a dilated plan needs a dilation scheme")

    @classmethod
    def for_box(
        cls,
        p: Region,
        radius: int = defaults.DEFAULT_RADIUS,
        level: int = 0,
        scheme: DilationScheme | None = None,
    ) -> SamplingPlan:
        """Plan for a box P, using the dual of its tiling lattice."""

        lo, hi = p.bounds()
        steps = [b - a for a, b in zip(lo, hi)]
        spectrum = Lattice.rectangular(p.frame, steps).dual()
        return cls(p, spectrum, radius, level, scheme)

    def with_radius(self, radius: int) -> SamplingPlan:
        return SamplingPlan(
            self.p, self.spectrum, radius, self.level, self.scheme
        )

    @property
    def dim(self) -> int:
        return self.p.dim

    def spectral_defect(self, radius: float = 2.0) -> float:
        return gram_max_offdiag(self.p, self.spectrum, radius)

    def band(self) -> Region:
        """``B^j P``, the spectral support of the level-j space."""

        if self.level == 0 or self.scheme is None:
            return self.p
        if self.scheme.frame != self.p.frame:
            raise FrameMismatch()
        return region_scale_diag(
            self.p, self.scheme.scale_factors(self.level)
        )

    def check(
        self,
        signal: BandlimitedSignal,
        tolerance: float = defaults.SPECTRAL_DEFECT,
    ) -> None:
        """Make sure the series can reconstruct `signal`.

        Raises
        ------
        FrameMismatch
            The signal and the plan use different frames.
        NotASpectrum
            The exponentials of the lattice are not orthogonal on P.
        OutsideBand
            Part of the signal's spectrum lies outside ``B^j P``.
        """

        if signal.frame != self.p.frame:
            raise FrameMismatch()
        defect = self.spectral_defect()
        if defect > tolerance:
            raise NotASpectrum(defect, tolerance)
        outside = region_subtract(signal.spectrum(), self.band())
        if not outside.is_empty:
            raise OutsideBand(region_volume(outside))

    def indices(self) -> npt.NDArray[np.int64]:
        r = self.radius
        axes = [range(-r, r + 1)] * self.dim
        return np.array(list(itertools.product(*axes)), dtype=np.int64)

    def gammas(self) -> FloatArray:
        return self.indices() @ self.spectrum.ambient_generator.T

    def forward(self) -> FloatArray:
        """``(B^j)^T`` applied to rows: ``x -> x @ B^j``."""

        if self.level == 0 or self.scheme is None:
            return np.eye(self.dim)
        return self.scheme.ambient(self.level)

    def sample_points(self) -> FloatArray:
        """``-L^j gamma`` for every index, one row each."""

        return -self.gammas() @ np.linalg.inv(self.forward())


def sample_signal(
    f: BandlimitedSignal, plan: SamplingPlan
) -> dict[tuple[int, ...], complex]:
    """The samples the plan asks for, keyed by lattice coordinates."""

    values = signal_eval(f, plan.sample_points())
    return {
        tuple(int(v) for v in n): complex(val)
        for n, val in zip(plan.indices(), values)
    }


def _series(
    plan: SamplingPlan, samples: Samples, y: FloatArray
) -> ComplexArray:
    idx = plan.indices()
    missing = sum(1 for n in idx if tuple(int(v) for v in n) not in samples)
    if missing:
        raise IncompletePlan(missing)
    values = np.array(
        [samples[tuple(int(v) for v in n)] for n in idx], dtype=complex
    )
    gammas = plan.gammas()
    area = region_volume(plan.p)

    pts = y.reshape(-1, plan.dim)
    out = np.empty(pts.shape[0], dtype=complex)
    step = max(1, _EVAL_CHUNK // len(gammas))
    for start in range(0, pts.shape[0], step):
        chunk = pts[start : start + step]
        phi = phi_eval(plan.p, chunk[:, None, :] + gammas[None, :, :])
        out[start : start + step] = phi @ values
    return (out / area).reshape(y.shape[:-1])


def wsk_reconstruct(
    plan: SamplingPlan, samples: Samples, x: npt.ArrayLike
) -> ComplexArray:
    """The truncated series ``|P|^-1 sum f(-gamma) phi(x + gamma)``.

    Raises
    ------
    IncompletePlan
        A sample with ``|n|_inf <= R`` is missing.
    """

    return _series(plan, samples, np.asarray(x, dtype=float))


def wsk_reconstruct_dilated(
    plan: SamplingPlan, samples: Samples, x: npt.ArrayLike
) -> ComplexArray:
    """The level-j series ``|P|^-1 sum f(-L^j gamma) phi((B^j)^T x +
    gamma)``; level 0 is :func:`wsk_reconstruct`."""

    xs = np.asarray(x, dtype=float)
    if plan.level == 0:
        return wsk_reconstruct(plan, samples, xs)
    return _series(plan, samples, xs @ plan.forward())


@dataclass(frozen=True, eq=False)
class DualCone:
    """The open cone ``{sum t_j g_j : t_j > 0}`` over the generators."""

    generators: FloatArray
    """``w alpha_1 .. w alpha_n``, one per row."""

    def coefficients(self, y: npt.ArrayLike) -> FloatArray:
        return np.asarray(y, dtype=float) @ np.linalg.inv(self.generators)

    def contains(self, y: npt.ArrayLike, eps: float = 0.0) -> bool:
        return bool(np.all(self.coefficients(y) > eps))


def dual_cone(simple: SimpleSystem, w: npt.ArrayLike) -> DualCone:
    """``C_w = w {sum t_j alpha_j : t_j > 0}``."""

    return DualCone(simple.simple_roots @ np.asarray(w, dtype=float).T)


def directional_decompose(
    f: BandlimitedSignal,
    group: MatrixGroup,
    simple: SimpleSystem,
    eps: float = defaults.EPS_GEOM,
) -> dict[int, BandlimitedSignal]:
    """Split f into the pieces ``f_w`` whose spectra lie in ``w C(Pi)``.

    Keys are group element indices.

    Raises
    ------
    StraddlingBox
        A spectrum box is not inside one closed chamber.
    """

    unit = simple.simple_roots / np.linalg.norm(
        simple.simple_roots, axis=1, keepdims=True
    )
    parts: dict[int, list[tuple[complex, Box]]] = {}
    for c, box in f.terms:
        centre = f.frame.to_ambient([float(v) for v in box.center])
        w_index = chamber_of(centre, simple, group, eps).element
        corners = f.frame.to_ambient(
            [[float(v) for v in corner] for corner in box.corners()]
        )
        pulled = corners @ group[w_index]
        scale = max(1.0, float(np.abs(corners).max()))
        if np.any(pulled @ unit.T < -eps * scale):
            raise StraddlingBox(box)
        parts.setdefault(w_index, []).append((c, box))
    return {
        k: BandlimitedSignal(f.frame, tuple(v))
        for k, v in sorted(parts.items())
    }


def eval_tube_extension(
    f_w: BandlimitedSignal,
    x: npt.ArrayLike,
    y: npt.ArrayLike,
    cone: DualCone,
) -> complex:
    """``F_w(x + iy) = integral of F f_w(l) exp(2 pi i (x + iy, l)) dl``.

    Raises
    ------
    OutsideDualCone
        `y` is not strictly inside the dual cone.
    """

    if not cone.contains(y):
        raise OutsideDualCone(np.asarray(y).tolist())
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    total = 0j
    for c, box in f_w.terms:
        total += c * complex(fourier_indicator(Region(f_w.frame, (box,)), -z))
    return total


def grid_energy(
    f: BandlimitedSignal | Callable[[FloatArray], ComplexArray],
    half_width: float,
    step: float,
    dim: int | None = None,
) -> float:
    """Riemann sum of ``|f|^2`` over the centred cube of the given
    half width."""

    d = dim if dim is not None else getattr(f, "dim")
    ticks = np.arange(-half_width, half_width, step) + step / 2
    total = 0.0
    block = max(1, _EVAL_CHUNK // max(1, len(ticks) ** (d - 1)))
    for start in range(0, len(ticks), block):
        axes = [ticks[start : start + block]] + [ticks] * (d - 1)
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        total += float(np.sum(np.abs(f(mesh.reshape(-1, d))) ** 2))
    return total * step**d


def random_box_signal(
    p: Region,
    n_terms: int,
    rng: np.random.Generator,
    grid: int = 4,
    denominator: int = 64,
) -> BandlimitedSignal:
    """A signal with `n_terms` disjoint random boxes inside the box P.

    P's bounding box is cut into ``grid^dim`` cells; each term takes a
    random rational sub-box of a distinct cell.
    """

    lo, hi = p.bounds()
    dim = p.dim
    cells = list(itertools.product(range(grid), repeat=dim))
    size = min(n_terms, len(cells))
    chosen = rng.choice(len(cells), size=size, replace=False)
    terms = []
    for index in chosen:
        cell = cells[int(index)]
        b_lo, b_hi = [], []
        for j in range(dim):
            width = (hi[j] - lo[j]) / grid
            start = lo[j] + cell[j] * width
            cuts = sorted(rng.choice(denominator + 1, size=2, replace=False))
            b_lo.append(start + width * Fraction(int(cuts[0]), denominator))
            b_hi.append(start + width * Fraction(int(cuts[1]), denominator))
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, Box(tuple(b_lo), tuple(b_hi))))
    return BandlimitedSignal(p.frame, tuple(terms))


def evaluation_grid(
    dim: int, half_width: float = 2.0, n: int | None = None
) -> FloatArray:
    """A regular grid of evaluation points in ``[-h, h]^dim``."""

    count = n if n is not None else (9 if dim <= 2 else 5)
    ticks = np.linspace(-half_width, half_width, count)
    mesh = np.stack(np.meshgrid(*([ticks] * dim), indexing="ij"), axis=-1)
    return mesh.reshape(-1, dim)


@dataclass(frozen=True)
class ExperimentRow:
    """One truncation radius of a sampling experiment."""

    radius: int
    l2_rel_error: float
    sup_error: float
    interp_max_abs_err: float
    seed: int


def run_sampling_experiment(
    plan: SamplingPlan,
    signal: BandlimitedSignal,
    radii: Sequence[int],
    points: FloatArray | None = None,
    seed: int = defaults.DEFAULT_SEED,
    interp_radius: int = 2,
) -> list[ExperimentRow]:
    """Reconstruct `signal` at each radius and measure the error.

    Raises
    ------
    FrameMismatch
        The signal and the plan use different frames.
    NotASpectrum
        The plan's lattice is not a spectrum of P.
    OutsideBand
        The signal is not band-limited to the plan's band.
    """

    plan.check(signal)
    pts = points if points is not None else evaluation_grid(plan.dim)
    truth = signal_eval(signal, pts)
    norm = float(np.linalg.norm(truth))
    rows = []
    for r in radii:
        sized = plan.with_radius(r)
        samples = sample_signal(signal, sized)
        approx = wsk_reconstruct_dilated(sized, samples, pts)
        err = approx - truth
        l2 = float(np.linalg.norm(err))
        rel = l2 / norm if norm > 0 else l2

        near = sized.with_radius(min(r, interp_radius))
        at = near.sample_points()
        back = wsk_reconstruct_dilated(sized, samples, at)
        expected = np.array(
            [samples[tuple(int(v) for v in n)] for n in near.indices()]
        )
        interp = float(np.max(np.abs(back - expected), initial=0.0))
        rows.append(
            ExperimentRow(
                r, rel, float(np.max(np.abs(err), initial=0.0)), interp, seed
            )
        )
        _LOG.debug(f"Radius {r}: relative L2 error {rel:.3e}.")
    return rows

