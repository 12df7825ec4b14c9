"""Scene configuration files.

A config file is one JSON object. It may name its class with a ``config``
key (``"scene"`` by default); nested objects such as ``tolerances`` are
decoded into their own config classes. Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, ClassVar, Union

from . import defaults
from .exceptions import CoxwaveError, InvalidConfig
from .roots import parse_family

__all__ = (
    "BaseConfig",
    "Tolerances",
    "SceneConfig",
    "METHODS",
    "parse_scheme",
    "load_config",
)

METHODS = ("mra", "section5", "example31")


class BaseConfig:
    _config_classes: ClassVar[dict[str, type[BaseConfig]]] = {}
    _config_name: ClassVar[str]
    _nested: ClassVar[dict[str, str]] = {}

    def __init_subclass__(cls) -> None:
        if not hasattr(cls, "_config_name"):
            raise AttributeError(f"{cls} is missing _config_name.")
        if used_by := BaseConfig._config_classes.get(cls._config_name):
            raise ValueError(
                f"_config_name {cls._config_name} is already used by "
                f"{used_by}"
            )
        BaseConfig._config_classes[cls._config_name] = cls

    def asdict(self) -> dict[str, Any]:
        """Convert this config to a dictionary."""

        dct: dict[str, Any] = dataclasses.asdict(self)  # type: ignore
        dct["config"] = self._config_name
        for key, name in self._nested.items():
            dct[key]["config"] = name
        return dct

    @staticmethod
    def fromdict(
        data: dict[str, Any], default: str = "scene"
    ) -> BaseConfig:
        """Convert a dictionary back into its config class.

        Raises
        ------
        InvalidConfig
            The class is unknown, a key is unknown or a value is invalid.
        """

        if not isinstance(data, dict):
            raise InvalidConfig("a config must be a JSON object")
        body = dict(data)
        name = body.pop("config", default)
        cls = BaseConfig._config_classes.get(name)
        if cls is None:
            raise InvalidConfig(f"unknown config class {name!r}")

        known = {f.name for f in dataclasses.fields(cls)}  # type: ignore
        unknown = sorted(set(body) - known)
        if unknown:
            raise InvalidConfig(f"unknown keys {unknown} in {name} config")
        for key, nested in cls._nested.items():
            if key in body:
                body[key] = BaseConfig.fromdict(body[key], nested)
        try:
            return cls(**body)
        except (TypeError, ValueError) as e:
            raise InvalidConfig(str(e)) from e


@dataclass
class Tolerances(BaseConfig):
    """Pass thresholds used by ``coxwave verify``."""

    _config_name = "tolerances"
    translation_defect: float = 1e-3
    """Largest gap plus overlap volume modulo the lattice."""
    multiplicity_one: float = 0.99
    """Smallest fraction of samples covered exactly once."""
    gram: float = 1e-2
    """Largest off-diagonal Gram entry for the iterative constructions."""
    mra_gram: float = 1e-10
    """Largest off-diagonal Gram entry for the multiwavelet sets."""


def parse_scheme(text: str) -> tuple[Fraction, ...]:
    """Read ``"diag:2,2"`` (or just ``"2,2"``) as diagonal scales.

    Raises
    ------
    InvalidConfig
        The text is not a comma separated list of positive rationals.
    """

    body = text.split(":", 1)[1] if text.startswith("diag:") else text
    try:
        scales = tuple(Fraction(s.strip()) for s in body.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidConfig(f"bad scheme {text!r}") from e
    if not scales or any(a <= 0 for a in scales):
        raise InvalidConfig(f"bad scheme {text!r}")
    return scales


@dataclass
class SceneConfig(BaseConfig):
    """Everything ``coxwave construct`` and ``coxwave verify`` need."""

    _config_name = "scene"
    _nested = {"tolerances": "tolerances"}
    method: str = "mra"
    """"mra", "section5" or "example31"."""
    family: str = "I2:4"
    """Root system family; ignored by "example31"."""
    scheme: str = "diag:2,2"
    """Diagonal of B in the dual frame."""
    sides: Union[str, None] = None
    """Side lengths of the scaling box, by default all ones."""
    lattice: Union[str, None] = None
    """Steps of the rectangular lattice T, by default the box sides."""
    depth: int = defaults.DEFAULT_DEPTH
    alpha_star_index: int = 1
    a: str = "2"
    """Dilation factor of the planar construction."""
    m: int = 4
    """Rotation order of the planar construction."""
    step: str = "1/64"
    """Staircase resolution of the planar construction."""
    seed: int = defaults.DEFAULT_SEED
    samples: int = defaults.DEFAULT_SAMPLES
    k_max: int = defaults.K_MAX
    gram_radius: float = 5.0
    tolerances: Tolerances = field(default_factory=Tolerances)
    out: str = "scene.json"
    svg: Union[str, None] = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InvalidConfig(
                f"method must be one of {', '.join(METHODS)}, "
                f"got {self.method!r}"
            )
        if not isinstance(self.tolerances, Tolerances):
            raise InvalidConfig("tolerances must be an object")
        try:
            if self.method != "example31":
                parse_family(self.family)
            Fraction(self.a)
            Fraction(self.step)
        except (CoxwaveError, ValueError, ZeroDivisionError) as e:
            raise InvalidConfig(str(e)) from e
        parse_scheme(self.scheme)
        if self.depth < 1 or self.samples < 1 or self.k_max < 0:
            raise InvalidConfig("depth, samples and k_max must be positive")

    @property
    def scales(self) -> tuple[Fraction, ...]:
        return parse_scheme(self.scheme)

    @property
    def side_lengths(self) -> Union[tuple[Fraction, ...], None]:
        return parse_scheme(self.sides) if self.sides else None

    @property
    def lattice_steps(self) -> Union[tuple[Fraction, ...], None]:
        return parse_scheme(self.lattice) if self.lattice else None

    def replace(self, **changes: Any) -> SceneConfig:
        """A copy with the non-None `changes` applied."""

        kept = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **kept)


def load_config(path: Union[str, Path]) -> SceneConfig:
    """Read a scene config file.

    Raises
    ------
    InvalidConfig
        The file is missing, is not JSON or is not a scene config.
    """

    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise InvalidConfig(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"{path} is not JSON: {e}") from e
    config = BaseConfig.fromdict(data)
    if not isinstance(config, SceneConfig):
        raise InvalidConfig(f"{path} is not a scene config")
    return config
