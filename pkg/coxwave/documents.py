"""JSON documents read and written by the command line.

Every document is a dataclass with a ``kind`` class variable. ``serialize``
turns it into plain JSON data and :func:`deserialize_document` looks the
kind up in :data:`KINDS` to turn the data back into a document. Rationals
are written as ``"p/q"`` strings, complex numbers as ``re``/``im`` pairs
and floats with Python's shortest round-trip repr.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, ClassVar, Dict, Type, Union

import numpy as np

from .exceptions import InvalidDocument, RankDeficient
from .groups import MatrixGroup
from .lattice import TileReport
from .multiplicity import MultiplicityReport
from .rational import RationalVector, format_fraction
from .region import Box, Frame, Region
from .roots import DualBasis, RootSystem, SimpleSystem
from .sampling import BandlimitedSignal, ExperimentRow

__all__ = (
    "DATA",
    "RegionDocument",
    "GroupDocument",
    "SignalDocument",
    "PlanDocument",
    "SceneDocument",
    "VerificationReport",
    "ExperimentReport",
    "ANY_DOCUMENT",
    "KINDS",
    "serialize",
    "deserialize_document",
    "read_document",
    "write_document",
    "dumps",
    "encode_region",
    "decode_region",
    "encode_cells",
    "decode_cells",
    "encode_rationals",
    "decode_rationals",
    "tile_report_data",
    "multiplicity_report_data",
)

DATA = Dict[str, Any]


def encode_rationals(values: RationalVector) -> list[str]:
    return [format_fraction(v) for v in values]


def decode_rationals(values: Any) -> RationalVector:
    if not isinstance(values, list):
        raise InvalidDocument(f"expected a list of rationals, got {values!r}")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise InvalidDocument(f"{v!r} is not an exact rational")
        try:
            out.append(Fraction(v))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidDocument(f"{v!r} is not an exact rational") from e
    return tuple(out)


def encode_cells(cells: tuple[Box, ...]) -> list[DATA]:
    return [
        {"lo": encode_rationals(c.lo), "hi": encode_rationals(c.hi)}
        for c in cells
    ]


def decode_cells(data: Any) -> tuple[Box, ...]:
    if not isinstance(data, list):
        raise InvalidDocument("cells must be a list")
    try:
        return tuple(
            Box(decode_rationals(c["lo"]), decode_rationals(c["hi"]))
            for c in data
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidDocument(f"bad cell: {e}") from e


def _decode_frame(data: Any) -> Frame:
    try:
        return Frame(np.array(data, dtype=float))
    except (TypeError, ValueError, RankDeficient) as e:
        raise InvalidDocument(f"bad frame: {e}") from e


def encode_region(region: Region) -> DATA:
    return {
        "frame": region.frame.basis.tolist(),
        "cells": encode_cells(region.cells),
    }


def decode_region(data: Any, frame: Frame | None = None) -> Region:
    """Read ``{frame, cells}``; `frame` overrides a missing frame."""

    if not isinstance(data, dict) or "cells" not in data:
        raise InvalidDocument("a region needs cells")
    if "frame" in data:
        frame = _decode_frame(data["frame"])
    if frame is None:
        raise InvalidDocument("a region needs a frame")
    cells = decode_cells(data["cells"])
    if any(c.dim != frame.dim for c in cells):
        raise InvalidDocument("cell dimension does not match the frame")
    region = Region(frame, cells)
    if not region.check_disjoint():
        raise InvalidDocument("region cells overlap")
    return region


def tile_report_data(report: TileReport) -> DATA:
    return {
        "is_tile": report.is_tile,
        "overlap_volume": report.overlap_volume,
        "gap_volume": report.gap_volume,
        "defect_cells": encode_cells(report.defect_cells),
    }


def multiplicity_report_data(report: MultiplicityReport) -> DATA:
    return {
        "histogram": {str(k): v for k, v in report.histogram.items()},
        "boundary_fraction": report.boundary_fraction,
        "seed": report.seed,
        "n_samples": report.n_samples,
    }


@dataclass
class RegionDocument:
    """A single region."""

    frame: list[list[float]]
    cells: list[DATA]

    kind: ClassVar[str] = "region"

    @classmethod
    def of(cls, region: Region) -> RegionDocument:
        return cls(**encode_region(region))

    def region(self) -> Region:
        return decode_region({"frame": self.frame, "cells": self.cells})


@dataclass
class GroupDocument:
    """A root system, its simple system, dual basis and group."""

    dim: int
    family: str
    roots: list[list[float]]
    simple: list[list[float]]
    dual: list[list[float]]
    elements: list[list[list[float]]]

    kind: ClassVar[str] = "group"

    @classmethod
    def of(
        cls,
        rs: RootSystem,
        simple: SimpleSystem,
        dual: DualBasis,
        group: MatrixGroup,
    ) -> GroupDocument:
        return cls(
            rs.dim,
            rs.family_tag,
            rs.roots.tolist(),
            simple.simple_roots.tolist(),
            dual.dual_roots.tolist(),
            group.stack.tolist(),
        )


@dataclass
class SignalDocument:
    """A signal ``F f = sum c_k chi_{S_k}``."""

    frame: list[list[float]]
    terms: list[DATA]

    kind: ClassVar[str] = "signal"

    @classmethod
    def of(cls, signal: BandlimitedSignal) -> SignalDocument:
        return cls(
            signal.frame.basis.tolist(),
            [
                {
                    "re": c.real,
                    "im": c.imag,
                    "lo": encode_rationals(b.lo),
                    "hi": encode_rationals(b.hi),
                }
                for c, b in signal.terms
            ],
        )

    def signal(self) -> BandlimitedSignal:
        frame = _decode_frame(self.frame)
        try:
            terms = tuple(
                (
                    complex(float(t["re"]), float(t.get("im", 0.0))),
                    Box(decode_rationals(t["lo"]), decode_rationals(t["hi"])),
                )
                for t in self.terms
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidDocument(f"bad signal term: {e}") from e
        if any(b.dim != frame.dim for _, b in terms):
            raise InvalidDocument("term dimension does not match the frame")
        return BandlimitedSignal(frame, terms)


@dataclass
class PlanDocument:
    """A sampling plan: the box P, the level and the dilation scales."""

    frame: list[list[float]]
    lo: list[str]
    hi: list[str]
    radius: int
    level: int = 0
    scales: Union[list[str], None] = None

    kind: ClassVar[str] = "plan"


@dataclass
class SceneDocument:
    """A constructed scene.

    `group` is a family tag such as ``"I2:4"`` or ``"rotation:4"`` for the
    cyclic rotations. `sets` maps names to cell lists in `frame`; the
    names listed in `wavelet_sets` are the sets to verify.
    """

    method: str
    group: str
    frame: list[list[float]]
    scales: list[str]
    lattice_steps: list[str]
    wavelet_sets: list[str]
    sets: dict[str, list[DATA]]
    params: DATA = field(default_factory=dict)

    kind: ClassVar[str] = "scene"

    def region(self, name: str) -> Region:
        try:
            cells = self.sets[name]
        except KeyError as e:
            raise InvalidDocument(f"scene has no set named {name!r}") from e
        return decode_region({"frame": self.frame, "cells": cells})


@dataclass
class VerificationReport:
    """Per-check results of ``coxwave verify``.

    `checks` maps a check name to ``{measured, tolerance, passed}`` plus
    any check-specific detail.
    """

    scene: str
    seed: int
    n_samples: int
    checks: dict[str, DATA]
    passed: bool
    wall_clock: Union[float, None] = None

    kind: ClassVar[str] = "verification"


@dataclass
class ExperimentReport:
    """The error table of ``coxwave sample``."""

    rows: list[DATA]
    level: int
    seed: int
    passed: bool = True

    kind: ClassVar[str] = "experiment"

    @classmethod
    def of(
        cls, rows: list[ExperimentRow], level: int, seed: int
    ) -> ExperimentReport:
        return cls(
            [
                {
                    "R": r.radius,
                    "l2_rel_error": r.l2_rel_error,
                    "sup_error": r.sup_error,
                    "interp_max_abs_err": r.interp_max_abs_err,
                    "seed": r.seed,
                }
                for r in rows
            ],
            level,
            seed,
        )


ANY_DOCUMENT = Union[
    RegionDocument,
    GroupDocument,
    SignalDocument,
    PlanDocument,
    SceneDocument,
    VerificationReport,
    ExperimentReport,
]

KINDS: dict[str, Type[ANY_DOCUMENT]] = {
    RegionDocument.kind: RegionDocument,
    GroupDocument.kind: GroupDocument,
    SignalDocument.kind: SignalDocument,
    PlanDocument.kind: PlanDocument,
    SceneDocument.kind: SceneDocument,
    VerificationReport.kind: VerificationReport,
    ExperimentReport.kind: ExperimentReport,
}


def serialize(document: ANY_DOCUMENT) -> DATA:
    """Convert a document to a dictionary tagged with its kind."""

    return {"kind": document.kind, **asdict(document)}


def deserialize_document(data: DATA) -> ANY_DOCUMENT:
    """Convert a dictionary back into its document class.

    Raises
    ------
    InvalidDocument
        The kind is unknown or the fields do not match.
    """

    if not isinstance(data, dict):
        raise InvalidDocument("a document must be a JSON object")
    body = dict(data)
    kind = body.pop("kind", None)
    cls = KINDS.get(kind) if isinstance(kind, str) else None
    if cls is None:
        raise InvalidDocument(f"unknown document kind {kind!r}")
    try:
        return cls(**body)
    except TypeError as e:
        raise InvalidDocument(f"bad {kind} document: {e}") from e


def dumps(document: ANY_DOCUMENT) -> str:
    return json.dumps(serialize(document), indent=2, sort_keys=True) + "\n"


def write_document(document: ANY_DOCUMENT, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(document))


def read_document(path: Union[str, Path]) -> ANY_DOCUMENT:
    """Read and decode a document file.

    Raises
    ------
    InvalidDocument
        The file is missing, is not JSON or is not a known document.
    """

    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidDocument(f"cannot read {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidDocument(f"{path} is not JSON: {e}") from e
    return deserialize_document(data)
