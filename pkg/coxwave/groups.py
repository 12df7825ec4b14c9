"""Finite matrix groups, reflection groups and their chambers."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import numpy.typing as npt

from . import defaults
from .exceptions import NonFiniteGroup, NotAReflection
from .roots import FloatArray, SimpleSystem, reflection_matrix

__all__ = (
    "MatrixGroup",
    "ReflectionGroup",
    "Cone",
    "ChamberLocation",
    "generate_group",
    "reflection_group",
    "rotation_group",
    "fundamental_cone",
    "chamber_of",
    "chambers_of",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

BoolArray = npt.NDArray[np.bool_]


def _key(g: FloatArray) -> tuple[float, ...]:
    return tuple((np.round(g, 6) + 0.0).ravel().tolist())


class MatrixGroup:
    """A finite group of orthogonal matrices.

    Elements are kept in generation order with the identity first.

    Parameters
    ----------
    generators : Sequence[FloatArray]
        The generating matrices.
    max_order : int
        Closure gives up past this many elements.
    eps : float
        Frobenius tolerance for matrix equality.

    Raises
    ------
    NonFiniteGroup
        Closure produced more than `max_order` elements.
    """

    def __init__(
        self,
        generators: Sequence[npt.ArrayLike],
        max_order: int = defaults.MAX_GROUP_ORDER,
        eps: float = defaults.EPS_GEOM,
        dim: int | None = None,
    ) -> None:
        gens = [np.array(g, dtype=float) for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("the trivial group needs an explicit dim")
            dim = gens[0].shape[0]
        self.dim: int = dim
        self.generators: tuple[FloatArray, ...] = tuple(gens)
        self.eps = eps

        self._elements: list[FloatArray] = []
        self._index: dict[tuple[float, ...], int] = {}
        self._stack = np.empty((0, dim, dim))
        self._close(max_order)

    def _add(self, g: FloatArray) -> None:
        g = g.copy()
        g.setflags(write=False)
        self._index[_key(g)] = len(self._elements)
        self._elements.append(g)
        self._stack = np.concatenate([self._stack, g[None]])

    def _close(self, max_order: int) -> None:
        self._add(np.eye(self.dim))
        frontier = [self._elements[0]]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = g @ s
                    if self.index_of(h) is not None:
                        continue
                    if len(self._elements) >= max_order:
                        raise NonFiniteGroup(max_order)
                    self._add(h)
                    nxt.append(h)
            frontier = nxt
        _LOG.debug(f"Closed a matrix group of order {self.order}.")

    @classmethod
    def trivial(cls, dim: int) -> MatrixGroup:
        return cls((), dim=dim)

    @property
    def order(self) -> int:
        return len(self._elements)

    @property
    def elements(self) -> tuple[FloatArray, ...]:
        return tuple(self._elements)

    @property
    def stack(self) -> FloatArray:
        """All elements as an ``(order, dim, dim)`` array."""

        return self._stack

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[FloatArray]:
        return iter(self._elements)

    def __getitem__(self, i: int) -> FloatArray:
        return self._elements[i]

    def index_of(self, g: npt.ArrayLike) -> int | None:
        """The index of `g`, or None when it is not an element."""

        m = np.asarray(g, dtype=float)
        i = self._index.get(_key(m))
        if i is not None and np.linalg.norm(self._elements[i] - m) <= (
            self.eps
        ):
            return i
        if not self._elements:
            return None
        dist = np.linalg.norm(self._stack - m, axis=(1, 2))
        j = int(np.argmin(dist))
        return j if dist[j] <= self.eps else None

    def __contains__(self, g: object) -> bool:
        return self.index_of(np.asarray(g)) is not None

    def inverse_index(self, i: int) -> int:
        j = self.index_of(self._elements[i].T)
        assert j is not None
        return j

    def is_closed(self) -> bool:
        """Check gh is an element for every pair."""

        return all(
            self.index_of(g @ h) is not None
            for g in self._elements
            for h in self._elements
        )


def _is_reflection(g: FloatArray, eps: float) -> bool:
    n = g.shape[0]
    return (
        g.shape == (n, n)
        and np.linalg.norm(g - g.T) <= eps
        and np.linalg.norm(g @ g - np.eye(n)) <= eps
        and abs(np.trace(g) - (n - 2)) <= eps
    )


class ReflectionGroup(MatrixGroup):
    """A finite group generated by reflections."""

    def __init__(
        self,
        generators: Sequence[npt.ArrayLike],
        max_order: int = defaults.MAX_GROUP_ORDER,
        eps: float = defaults.EPS_GEOM,
    ) -> None:
        for i, g in enumerate(generators):
            if not _is_reflection(np.asarray(g, dtype=float), 1e-9):
                raise NotAReflection(i)
        super().__init__(generators, max_order, eps)


def generate_group(
    generators: Sequence[npt.ArrayLike],
    max_order: int = defaults.MAX_GROUP_ORDER,
    eps: float = defaults.EPS_GEOM,
) -> ReflectionGroup:
    """Close a set of reflections under multiplication.

    Raises
    ------
    NotAReflection
        Some generator is not a reflection matrix.
    NonFiniteGroup
        More than `max_order` elements were produced.
    """

    return ReflectionGroup(generators, max_order, eps)


def reflection_group(simple: SimpleSystem) -> ReflectionGroup:
    """The Coxeter group generated by the simple reflections."""

    return generate_group(simple.reflections())


def rotation_group(m: int) -> MatrixGroup:
    """The cyclic group of the planar rotations by 2 pi j / m."""

    t = 2 * math.pi / m
    r = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    return MatrixGroup([r])


@dataclass(frozen=True, eq=False)
class Cone:
    """The closed polyhedral cone ``{x : (x, n_i) >= 0}``."""

    normals: FloatArray
    """Inward normals, one per row."""

    def __post_init__(self) -> None:
        n = np.array(self.normals, dtype=float)
        n = n / np.linalg.norm(n, axis=1, keepdims=True)
        n.setflags(write=False)
        object.__setattr__(self, "normals", n)

    @property
    def dim(self) -> int:
        return int(self.normals.shape[1])

    def mask(
        self, points: npt.ArrayLike, eps: float = defaults.EPS_GEOM
    ) -> tuple[BoolArray, BoolArray]:
        """Closed-cone membership and the eps band around its walls."""

        d = np.atleast_2d(np.asarray(points, dtype=float)) @ self.normals.T
        inside = np.all(d >= 0.0, axis=1)
        near = np.any(np.abs(d) <= eps, axis=1)
        boundary = np.all(d >= -eps, axis=1) & near
        return inside, boundary

    def contains(
        self, x: npt.ArrayLike, eps: float = defaults.EPS_GEOM
    ) -> bool:
        d = self.normals @ np.asarray(x, dtype=float)
        return bool(np.all(d >= -eps))

    def transformed(self, w: npt.ArrayLike) -> Cone:
        """The image ``w C`` under an orthogonal matrix."""

        return Cone(self.normals @ np.asarray(w, dtype=float).T)


def fundamental_cone(simple: SimpleSystem) -> Cone:
    """The closed chamber ``C(Pi) = {x : (x, alpha) >= 0, alpha in Pi}``."""

    return Cone(simple.simple_roots)


@dataclass(frozen=True)
class ChamberLocation:
    """Where a point sits relative to the chambers."""

    element: int
    """Index of the group element w with ``x`` in ``w C(Pi)``."""
    canonical: tuple[float, ...]
    """``w^-1 x``, a point of the fundamental chamber."""
    on_boundary: bool
    """The point is within eps of a wall."""


def _lex_key(g: FloatArray) -> tuple[float, ...]:
    return tuple((np.round(g, 9) + 0.0).ravel().tolist())


def chamber_of(
    x: npt.ArrayLike,
    simple: SimpleSystem,
    group: MatrixGroup,
    eps: float = defaults.EPS_GEOM,
) -> ChamberLocation:
    """Find w with ``x`` in ``w C(Pi)`` by reflecting into the chamber.

    The point is reflected along the first simple root it has negative
    inner product with until none is left. On a wall several elements
    qualify and the lexicographically least matrix is returned.
    """

    y = np.array(x, dtype=float)
    w = np.eye(group.dim)
    pi = simple.simple_roots
    refl = simple.reflections()
    for _ in range(4 * group.order + 4):
        dots = pi @ y
        neg = np.flatnonzero(dots < 0)
        if neg.size == 0:
            break
        r = refl[int(neg[0])]
        y = r @ y
        w = w @ r

    unit = pi / np.linalg.norm(pi, axis=1, keepdims=True)
    on_boundary = bool(np.min(unit @ y) <= eps)
    if on_boundary:
        pulled = np.einsum("kji,j->ki", group.stack, np.asarray(x, float))
        ok = np.all(pulled @ unit.T >= -eps, axis=1)
        candidates = np.flatnonzero(ok)
        best = min(candidates, key=lambda k: _lex_key(group[int(k)]))
        index = int(best)
        y = pulled[index]
    else:
        found = group.index_of(w)
        assert found is not None
        index = found
    return ChamberLocation(index, tuple(float(v) for v in y), on_boundary)


def chambers_of(
    points: npt.ArrayLike,
    simple: SimpleSystem,
    group: MatrixGroup,
    eps: float = defaults.EPS_GEOM,
) -> tuple[npt.NDArray[np.int64], FloatArray, BoolArray]:
    """Vectorized :func:`chamber_of` for many points (rows).

    Returns
    -------
    elements, canonical, boundary
        Group element indices, the points pulled back into ``C(Pi)`` and
        the wall flags.
    """

    x = np.atleast_2d(np.asarray(points, dtype=float))
    n, dim = x.shape
    pi = simple.simple_roots
    refl = np.array([reflection_matrix(a) for a in pi])
    y = x.copy()
    w = np.broadcast_to(np.eye(dim), (n, dim, dim)).copy()
    for _ in range(4 * group.order + 4):
        neg = (y @ pi.T) < 0
        active = np.flatnonzero(neg.any(axis=1))
        if active.size == 0:
            break
        first = np.argmax(neg[active], axis=1)
        r = refl[first]
        y[active] = np.einsum("kij,kj->ki", r, y[active])
        w[active] = np.einsum("kij,kjl->kil", w[active], r)

    flat = group.stack.reshape(group.order, -1)
    elements = np.empty(n, dtype=np.int64)
    step = 4096
    for start in range(0, n, step):
        chunk = w[start : start + step].reshape(-1, dim * dim)
        dist = np.linalg.norm(chunk[:, None, :] - flat[None], axis=2)
        elements[start : start + step] = np.argmin(dist, axis=1)

    unit = pi / np.linalg.norm(pi, axis=1, keepdims=True)
    boundary = np.min(y @ unit.T, axis=1) <= eps
    for i in np.flatnonzero(boundary):
        loc = chamber_of(x[i], simple, group, eps)
        elements[i] = loc.element
        y[i] = loc.canonical
    return elements, y, boundary
