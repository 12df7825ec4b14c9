from __future__ import annotations

import pytest

from coxwave.groups import ReflectionGroup, reflection_group
from coxwave.region import Frame
from coxwave.roots import (
    DualBasis,
    SimpleSystem,
    build_root_system,
    dual_basis,
    simple_system,
)


@pytest.fixture(scope="session")
def i2_4() -> tuple[SimpleSystem, DualBasis, ReflectionGroup]:
    simple = simple_system(build_root_system("I2:4"))
    return simple, dual_basis(simple), reflection_group(simple)


@pytest.fixture(scope="session")
def a3() -> tuple[SimpleSystem, DualBasis, ReflectionGroup]:
    simple = simple_system(build_root_system("A3"))
    return simple, dual_basis(simple), reflection_group(simple)


@pytest.fixture(scope="session")
def i2_4_frame(
    i2_4: tuple[SimpleSystem, DualBasis, ReflectionGroup]
) -> Frame:
    return i2_4[1].frame()
