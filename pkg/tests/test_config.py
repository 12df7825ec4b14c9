from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from coxwave.config import (
    BaseConfig,
    SceneConfig,
    Tolerances,
    load_config,
    parse_scheme,
)
from coxwave.exceptions import InvalidConfig


def test_defaults() -> None:
    config = SceneConfig()
    assert config.method == "mra"
    assert config.scales == (Fraction(2), Fraction(2))
    assert config.side_lengths is None
    assert config.lattice_steps is None
    assert config.tolerances == Tolerances()
    assert config.tolerances.multiplicity_one == 0.99


def test_parse_scheme() -> None:
    assert parse_scheme("diag:2,2,2") == (2, 2, 2)
    assert parse_scheme("3/2, 4") == (Fraction(3, 2), Fraction(4))
    for bad in ("diag:", "diag:2,x", "2,0", "-1,2", "1/0"):
        with pytest.raises(InvalidConfig):
            parse_scheme(bad)


@pytest.mark.parametrize(
    "changes",
    [
        {"method": "tiling"},
        {"family": "E8"},
        {"scheme": "diag:2,-2"},
        {"a": "two"},
        {"depth": 0},
        {"samples": 0},
        {"k_max": -1},
    ],
)
def test_invalid_scene(changes: dict[str, object]) -> None:
    with pytest.raises(InvalidConfig):
        SceneConfig(**changes)  # type: ignore[arg-type]


def test_example31_ignores_family() -> None:
    config = SceneConfig(method="example31", family="anything")
    assert config.m == 4


def test_dict_round_trip() -> None:
    config = SceneConfig(
        method="section5",
        depth=3,
        tolerances=Tolerances(gram=0.5),
    )
    data = config.asdict()
    assert data["config"] == "scene"
    assert data["tolerances"]["config"] == "tolerances"
    assert BaseConfig.fromdict(json.loads(json.dumps(data))) == config


def test_nested_tolerances_without_tag() -> None:
    config = BaseConfig.fromdict({"tolerances": {"gram": 0.25}})
    assert isinstance(config, SceneConfig)
    assert config.tolerances.gram == 0.25
    assert config.tolerances.mra_gram == 1e-10


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"config": "nope"},
        {"colour": "red"},
        {"tolerances": {"gram": 0.1, "speed": 2}},
        {"tolerances": 3},
    ],
)
def test_bad_dicts(data: object) -> None:
    with pytest.raises(InvalidConfig):
        BaseConfig.fromdict(data)  # type: ignore[arg-type]


def test_load_config(tmp_path: Path) -> None:
    path = tmp_path / "scene.json"
    path.write_text(json.dumps({"family": "A3", "scheme": "diag:2,2,2"}))
    config = load_config(path)
    assert config.family == "A3"
    assert len(config.scales) == 3


def test_load_config_errors(tmp_path: Path) -> None:
    with pytest.raises(InvalidConfig):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    with pytest.raises(InvalidConfig):
        load_config(bad)
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"config": "tolerances"}))
    with pytest.raises(InvalidConfig):
        load_config(tol)


def test_replace_skips_none() -> None:
    config = SceneConfig(depth=5)
    changed = config.replace(depth=None, seed=7, out="x.json")
    assert changed.depth == 5
    assert changed.seed == 7
    assert changed.out == "x.json"
    assert config.seed == 0
