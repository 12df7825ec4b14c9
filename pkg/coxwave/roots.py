"""Root systems, simple systems and dual bases.

Supported families are the dihedral systems I2(m), A3 (the tetrahedral
system, Weyl group Sym(4)), B3 (the cube) and I2(m)xA1.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import nnls

from . import defaults
from .exceptions import (
    DegenerateOrderVector,
    InvalidRootSystem,
    RankDeficient,
    UnsupportedFamily,
    ZeroVector,
)
from .region import Frame

__all__ = (
    "FloatArray",
    "Family",
    "RootSystem",
    "SimpleSystem",
    "DualBasis",
    "reflection_matrix",
    "parse_family",
    "build_root_system",
    "simple_system",
    "dual_basis",
)

FloatArray = npt.NDArray[np.float64]

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

_DIHEDRAL = re.compile(r"^I2[:(](?P<m>\d+)\)?(?P<a1>XA1)?$")


def _frozen(a: npt.ArrayLike) -> FloatArray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def reflection_matrix(alpha: npt.ArrayLike) -> FloatArray:
    """The matrix of ``x -> x - 2 (x, a)/(a, a) a``.

    Raises
    ------
    ZeroVector
        `alpha` is the zero vector.
    """

    a = np.asarray(alpha, dtype=float).ravel()
    norm2 = float(a @ a)
    if norm2 == 0.0:
        raise ZeroVector()
    return np.eye(a.size) - 2.0 * np.outer(a, a) / norm2


@dataclass(frozen=True)
class Family:
    """A parsed root system family."""

    name: str
    """One of "I2", "A3", "B3", "I2xA1"."""
    m: int | None = None
    """The dihedral parameter for I2(m) and I2(m)xA1."""

    @property
    def tag(self) -> str:
        if self.name == "I2":
            return f"I2({self.m})"
        if self.name == "I2xA1":
            return f"I2({self.m})xA1"
        return self.name

    @property
    def dim(self) -> int:
        return 2 if self.name == "I2" else 3

    @property
    def root_count(self) -> int:
        assert self.m is not None or self.name in ("A3", "B3")
        return {
            "I2": 2 * (self.m or 0),
            "I2xA1": 2 * (self.m or 0) + 2,
            "A3": 12,
            "B3": 18,
        }[self.name]

    @property
    def group_order(self) -> int:
        return {
            "I2": 2 * (self.m or 0),
            "I2xA1": 4 * (self.m or 0),
            "A3": 24,
            "B3": 48,
        }[self.name]


def parse_family(spec: str | Family) -> Family:
    """Parse "I2:4", "I2(4)", "A3", "B3", "I2:3xA1" and similar tags."""

    if isinstance(spec, Family):
        return spec
    s = spec.strip().upper().replace(" ", "").replace("×", "X")
    if s in ("A3", "B3"):
        return Family(s)
    if match := _DIHEDRAL.match(s):
        m = int(match["m"])
        if m < 2:
            raise UnsupportedFamily(spec)
        return Family("I2xA1" if match["a1"] else "I2", m)
    raise UnsupportedFamily(spec)


def _dihedral_roots(m: int) -> FloatArray:
    angles = np.arange(2 * m) * math.pi / m
    roots = np.column_stack([np.cos(angles), np.sin(angles)])
    roots[np.abs(roots) < 1e-15] = 0.0
    return roots


def _helmert(n: int) -> FloatArray:
    """Orthonormal rows spanning the sum-zero hyperplane of R^n."""

    rows = []
    for k in range(1, n):
        row = np.zeros(n)
        row[:k] = 1.0
        row[k] = -float(k)
        rows.append(row / math.sqrt(k * (k + 1)))
    return np.array(rows)


def _a3_roots() -> FloatArray:
    basis = _helmert(4)
    eye = np.eye(4)
    roots = [
        basis @ (eye[i] - eye[j])
        for i in range(4)
        for j in range(4)
        if i != j
    ]
    return np.array(roots)


def _b3_roots() -> FloatArray:
    eye = np.eye(3)
    roots = [s * eye[i] for i in range(3) for s in (1.0, -1.0)]
    for i in range(3):
        for j in range(i + 1, 3):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    roots.append(si * eye[i] + sj * eye[j])
    return np.array(roots)


def check_root_system(roots: FloatArray, eps: float) -> None:
    """Raise :class:`InvalidRootSystem` unless the three axioms hold."""

    n, dim = roots.shape
    if n == 0 or np.any(np.linalg.norm(roots, axis=1) == 0.0):
        raise InvalidRootSystem("roots must be nonzero")
    if np.linalg.matrix_rank(roots) != dim:
        raise InvalidRootSystem("roots do not span the ambient space")

    norms = np.linalg.norm(roots, axis=1)
    scale = max(1.0, float(norms.max()))
    for i, alpha in enumerate(roots):
        cosines = (roots @ alpha) / (norms * norms[i])
        parallel = np.flatnonzero(np.abs(np.abs(cosines) - 1.0) < eps)
        has_negative = np.any(
            np.linalg.norm(roots[parallel] + alpha, axis=1) < eps * scale
        )
        if len(parallel) != 2 or not has_negative:
            raise InvalidRootSystem(
                f"root {alpha.tolist()} has parallel roots other than "
                "its negative"
            )

        images = roots @ reflection_matrix(alpha).T
        dist = np.linalg.norm(images[:, None, :] - roots[None], axis=2)
        if np.any(dist.min(axis=1) > eps * scale):
            raise InvalidRootSystem(
                f"not closed under the reflection along {alpha.tolist()}"
            )


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite root system in R^dim.

    The constructor checks the axioms: the roots span, the only multiples
    of a root in the system are the root and its negative, and the system
    is closed under every r_alpha.
    """

    roots: FloatArray
    """The roots, one per row."""
    family_tag: str
    """"I2(m)", "A3", "B3", "I2(m)xA1", or "custom" for raw vectors."""
    eps: float = field(default=defaults.EPS_GEOM, repr=False)

    def __post_init__(self) -> None:
        roots = _frozen(self.roots)
        if roots.ndim != 2:
            raise InvalidRootSystem("roots must be given as rows")
        check_root_system(roots, self.eps)
        object.__setattr__(self, "roots", roots)

    @classmethod
    def from_vectors(
        cls, vectors: npt.ArrayLike, family_tag: str = "custom"
    ) -> RootSystem:
        return cls(np.array(vectors, dtype=float), family_tag)

    @property
    def dim(self) -> int:
        return int(self.roots.shape[1])

    def __len__(self) -> int:
        return int(self.roots.shape[0])

    def reflections(self) -> list[FloatArray]:
        return [reflection_matrix(alpha) for alpha in self.roots]


def build_root_system(family_spec: str | Family) -> RootSystem:
    """Build one of the supported root systems.

    Parameters
    ----------
    family_spec : str | Family
        "I2:m" (m >= 2), "A3", "B3" or "I2:mxA1".

    Raises
    ------
    UnsupportedFamily
        The tag names a family outside the supported list.
    """

    family = parse_family(family_spec)
    if family.name == "I2":
        assert family.m is not None
        roots = _dihedral_roots(family.m)
    elif family.name == "I2xA1":
        assert family.m is not None
        planar = _dihedral_roots(family.m)
        roots = np.vstack(
            [
                np.column_stack([planar, np.zeros(len(planar))]),
                [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
            ]
        )
    elif family.name == "A3":
        roots = _a3_roots()
    else:
        roots = _b3_roots()

    rs = RootSystem(roots, family.tag)
    _LOG.debug(f"Built root system {family.tag} with {len(rs)} roots.")
    return rs


@dataclass(frozen=True, eq=False)
class SimpleSystem:
    """A simple system of a root system."""

    simple_roots: FloatArray
    """The simple roots alpha_1..alpha_n, one per row."""
    order_vector: tuple[float, ...]
    """The generic vector whose inner product orders the roots."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "simple_roots", _frozen(self.simple_roots))

    @property
    def dim(self) -> int:
        return int(self.simple_roots.shape[1])

    def __len__(self) -> int:
        return int(self.simple_roots.shape[0])

    def coefficients(self, vectors: npt.ArrayLike) -> FloatArray:
        """Coordinates of `vectors` (rows) in the basis of simple roots."""

        return np.asarray(vectors, dtype=float) @ np.linalg.inv(
            self.simple_roots
        )

    def reflections(self) -> list[FloatArray]:
        return [reflection_matrix(alpha) for alpha in self.simple_roots]


def _generic_order_vector(
    rs: RootSystem, order_vector: Sequence[float] | None, seed: int
) -> FloatArray:
    v = np.array(
        order_vector
        if order_vector is not None
        else defaults.default_order_vector(rs.dim),
        dtype=float,
    )
    rng = np.random.default_rng(seed)
    for _ in range(defaults.ORDER_VECTOR_RETRIES + 1):
        dots = rs.roots @ v
        if np.all(np.abs(dots) > rs.eps * np.linalg.norm(v)):
            return v
        _LOG.debug(f"Order vector {v.tolist()} lies on a root hyperplane.")
        v = v + rng.normal(scale=1e-3, size=v.shape)
    raise DegenerateOrderVector(defaults.ORDER_VECTOR_RETRIES)


def simple_system(
    rs: RootSystem,
    order_vector: Sequence[float] | None = None,
    seed: int = defaults.DEFAULT_SEED,
) -> SimpleSystem:
    """Extract the simple system of the positive system cut out by
    `order_vector`.

    The positive roots are those with positive inner product with the
    order vector. A positive root is simple when it is not a nonnegative
    combination of the other positive roots (checked with NNLS), which
    for crystallographic systems is the usual "not a sum of two positive
    roots" rule and stays correct for the unit-length dihedral roots.
    Simple roots are returned by decreasing inner product with the order
    vector.

    Raises
    ------
    DegenerateOrderVector
        Every perturbed order vector stayed on a root hyperplane.
    InvalidRootSystem
        The extracted set is not a simple system.
    """

    v = _generic_order_vector(rs, order_vector, seed)
    positive = rs.roots[rs.roots @ v > 0]

    simple: list[FloatArray] = []
    for i, alpha in enumerate(positive):
        others = np.delete(positive, i, axis=0)
        _, residual = nnls(others.T, alpha)
        if residual > 1e-7 * float(np.linalg.norm(alpha)):
            simple.append(alpha)

    if len(simple) != rs.dim:
        raise InvalidRootSystem(
            f"found {len(simple)} simple roots in dimension {rs.dim}"
        )

    simple.sort(key=lambda a: (-float(a @ v), tuple(a)))
    ss = SimpleSystem(np.array(simple), tuple(float(x) for x in v))

    coeffs = ss.coefficients(rs.roots)
    tol = 1e-9
    single_signed = np.all(coeffs >= -tol, axis=1) | np.all(
        coeffs <= tol, axis=1
    )
    if not np.all(single_signed):
        raise InvalidRootSystem("roots with mixed-sign simple coefficients")
    return ss


@dataclass(frozen=True, eq=False)
class DualBasis:
    """The basis alpha_1*..alpha_n* with (alpha_i, alpha_j*) = delta_ij."""

    dual_roots: FloatArray
    """The dual vectors, one per row."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "dual_roots", _frozen(self.dual_roots))

    @property
    def dim(self) -> int:
        return int(self.dual_roots.shape[1])

    def frame(self) -> Frame:
        """The coordinate frame whose columns are the dual vectors."""

        return Frame(self.dual_roots.T)

    def gram_error(self, simple: SimpleSystem) -> float:
        """max |(alpha_i, alpha_j*) - delta_ij|."""

        gram = simple.simple_roots @ self.dual_roots.T
        return float(np.abs(gram - np.eye(len(gram))).max())


def dual_basis(simple: SimpleSystem | npt.ArrayLike) -> DualBasis:
    """Compute the dual basis of a simple system.

    Raises
    ------
    RankDeficient
        The simple roots are linearly dependent.
    """

    pi = (
        simple.simple_roots
        if isinstance(simple, SimpleSystem)
        else np.asarray(simple, dtype=float)
    )
    if pi.shape[0] != pi.shape[1] or abs(np.linalg.det(pi)) < 1e-12:
        raise RankDeficient("simple system")
    return DualBasis(np.linalg.inv(pi).T)
