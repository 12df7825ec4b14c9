from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from coxwave.documents import (
    KINDS,
    ExperimentReport,
    GroupDocument,
    PlanDocument,
    RegionDocument,
    SceneDocument,
    SignalDocument,
    VerificationReport,
    decode_rationals,
    decode_region,
    deserialize_document,
    dumps,
    encode_rationals,
    multiplicity_report_data,
    read_document,
    serialize,
    write_document,
)
from coxwave.exceptions import InvalidDocument
from coxwave.groups import ReflectionGroup
from coxwave.multiplicity import MultiplicityReport
from coxwave.region import Box, Frame, Region, same_set
from coxwave.roots import DualBasis, SimpleSystem, build_root_system
from coxwave.sampling import BandlimitedSignal, ExperimentRow

Fixture = tuple[SimpleSystem, DualBasis, ReflectionGroup]


def test_kinds_are_unique() -> None:
    assert len(KINDS) == 7
    for kind, cls in KINDS.items():
        assert cls.kind == kind


def test_rationals() -> None:
    values = (Fraction(1, 3), Fraction(-2), Fraction(0))
    assert encode_rationals(values) == ["1/3", "-2", "0"]
    assert decode_rationals(["1/3", -2, "0"]) == values
    for bad in (["0.5x"], [0.5], [True], "1/2", ["1/0"]):
        with pytest.raises(InvalidDocument):
            decode_rationals(bad)


def test_region_document_is_exact(i2_4_frame: Frame, tmp_path: Path) -> None:
    region = Region.from_boxes(
        i2_4_frame,
        [Box.of((0, 0), ("1/3", "2/7")), Box.of(("1/3", 0), (1, "1/64"))],
    )
    path = tmp_path / "region.json"
    write_document(RegionDocument.of(region), path)
    doc = read_document(path)
    assert isinstance(doc, RegionDocument)
    back = doc.region()
    assert back.frame == region.frame
    assert back.cells == region.cells
    assert same_set(back, region)


def test_overlapping_cells_are_rejected() -> None:
    cells = [
        {"lo": ["0", "0"], "hi": ["1", "1"]},
        {"lo": ["1/2", "0"], "hi": ["2", "1"]},
    ]
    with pytest.raises(InvalidDocument):
        decode_region({"frame": [[1.0, 0.0], [0.0, 1.0]], "cells": cells})


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"frame": [[1.0, 0.0], [0.0, 1.0]]},
        {"cells": []},
        {"frame": [[1.0, 2.0], [2.0, 4.0]], "cells": []},
        {"frame": "I", "cells": []},
        {"frame": [[1.0, 0.0], [0.0, 1.0]], "cells": [{"lo": ["0"]}]},
        {
            "frame": [[1.0, 0.0], [0.0, 1.0]],
            "cells": [{"lo": ["0"], "hi": ["1"]}],
        },
        {
            "frame": [[1.0, 0.0], [0.0, 1.0]],
            "cells": [{"lo": ["1", "0"], "hi": ["0", "1"]}],
        },
    ],
)
def test_bad_regions(data: object) -> None:
    with pytest.raises(InvalidDocument):
        decode_region(data)


def test_group_document(i2_4: Fixture) -> None:
    simple, dual, group = i2_4
    doc = GroupDocument.of(build_root_system("I2:4"), simple, dual, group)
    data = json.loads(dumps(doc))
    assert data["kind"] == "group"
    assert data["dim"] == 2
    assert len(data["elements"]) == 8
    assert len(data["roots"]) == 8


def test_signal_document() -> None:
    frame = Frame([[1.0, 0.5], [0.0, 1.0]])
    signal = BandlimitedSignal(
        frame,
        (
            (1.5 - 0.25j, Box.of((0, 0), ("1/2", 1))),
            (2.0, Box.of(("1/2", 0), (1, "1/3"))),
        ),
    )
    doc = deserialize_document(json.loads(dumps(SignalDocument.of(signal))))
    assert isinstance(doc, SignalDocument)
    back = doc.signal()
    assert back.frame == frame
    assert back.terms == signal.terms


def test_bad_signal_terms() -> None:
    doc = SignalDocument([[1.0, 0.0], [0.0, 1.0]], [{"re": 1.0}])
    with pytest.raises(InvalidDocument):
        doc.signal()
    doc = SignalDocument(
        [[1.0, 0.0], [0.0, 1.0]], [{"re": 1.0, "lo": ["0"], "hi": ["1"]}]
    )
    with pytest.raises(InvalidDocument):
        doc.signal()


def test_scene_document() -> None:
    doc = SceneDocument(
        method="mra",
        group="I2:4",
        frame=[[1.0, 0.0], [0.0, 1.0]],
        scales=["2", "2"],
        lattice_steps=["1", "1"],
        wavelet_sets=["omega_1"],
        sets={"omega_1": [{"lo": ["1", "0"], "hi": ["2", "1"]}]},
    )
    back = deserialize_document(serialize(doc))
    assert back == doc
    assert isinstance(back, SceneDocument)
    assert back.region("omega_1").exact_volume == 1
    with pytest.raises(InvalidDocument):
        back.region("K")


def test_reports_serialize_stably() -> None:
    report = VerificationReport(
        scene="s.json",
        seed=0,
        n_samples=10,
        checks={"b": {"passed": True}, "a": {"passed": False}},
        passed=False,
    )
    text = dumps(report)
    assert text == dumps(deserialize_document(json.loads(text)))
    assert json.loads(text)["wall_clock"] is None

    rows = [ExperimentRow(8, 0.25, 0.5, 1e-13, 3)]
    exp = ExperimentReport.of(rows, level=1, seed=3)
    assert exp.rows == [
        {
            "R": 8,
            "l2_rel_error": 0.25,
            "sup_error": 0.5,
            "interp_max_abs_err": 1e-13,
            "seed": 3,
        }
    ]
    assert exp.passed


def test_floats_round_trip() -> None:
    x = float(np.nextafter(0.1, 1.0))
    report = ExperimentReport([{"l2_rel_error": x}], 0, 0)
    back = deserialize_document(json.loads(dumps(report)))
    assert isinstance(back, ExperimentReport)
    assert back.rows[0]["l2_rel_error"] == x


@pytest.mark.parametrize(
    "x", [0.1, 1 / 3, 2 / 3 * 1e-300, 123456789.0123456, 5e-324, 1e16]
)
def test_floats_use_at_most_17_digits(x: float) -> None:
    text = dumps(ExperimentReport([{"l2_rel_error": x}], 0, 0))
    written = json.loads(text)["rows"][0]["l2_rel_error"]
    assert written == float(format(x, ".17g")) == x
    token = text.split('"l2_rel_error": ')[1].split("\n")[0].rstrip(",")
    mantissa = token.lower().split("e")[0].replace(".", "").lstrip("0-")
    assert 1 <= len(mantissa) <= 17


def test_multiplicity_report_data() -> None:
    report = MultiplicityReport({1: 0.75, 2: 0.25}, 0.0, 100, 5)
    data = multiplicity_report_data(report)
    assert data["histogram"] == {"1": 0.75, "2": 0.25}
    assert data["seed"] == 5


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"kind": "nothing"},
        {"kind": 3},
        {"frame": []},
        {"kind": "plan", "frame": []},
        {"kind": "region", "frame": [], "cells": [], "extra": 1},
    ],
)
def test_bad_documents(data: object) -> None:
    with pytest.raises(InvalidDocument):
        deserialize_document(data)  # type: ignore[arg-type]


def test_read_document_errors(tmp_path: Path) -> None:
    with pytest.raises(InvalidDocument):
        read_document(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidDocument):
        read_document(bad)


def test_plan_document_defaults() -> None:
    doc = deserialize_document(
        {
            "kind": "plan",
            "frame": [[1.0]],
            "lo": ["0"],
            "hi": ["1"],
            "radius": 4,
        }
    )
    assert isinstance(doc, PlanDocument)
    assert doc.level == 0
    assert doc.scales is None
