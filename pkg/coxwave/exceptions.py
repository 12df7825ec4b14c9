from __future__ import annotations

from typing import Any

__all__ = (
    "CoxwaveError",
    "ZeroVector",
    "NotAReflection",
    "UnsupportedFamily",
    "InvalidRootSystem",
    "NonFiniteGroup",
    "DegenerateOrderVector",
    "RankDeficient",
    "FrameMismatch",
    "ZeroScaleFactor",
    "LatticeIncompatible",
    "UnsupportedTransform",
    "SearchRadiusExceeded",
    "NonExpansive",
    "UnsupportedParameter",
    "EmptyWindow",
    "IncompletePlan",
    "StraddlingBox",
    "OutsideDualCone",
    "InvalidConfig",
    "InvalidDocument",
    "OutsideBand",
    "NotASpectrum",
)


class CoxwaveError(Exception):
    pass


_E = CoxwaveError


class ZeroVector(_E):
    """A reflection was requested along the zero vector."""

    def __init__(self) -> None:
        super().__init__("Cannot reflect along the zero vector.")


class NotAReflection(_E):
    """A group generator is not an orthogonal reflection."""

    def __init__(self, index: int) -> None:
        super().__init__(f"Generator {index} is not a reflection matrix.")
        self.index = index


class UnsupportedFamily(_E):
    """The root system family is not I2(m), A3, B3 or I2(m)xA1."""

    def __init__(self, family: str) -> None:
        super().__init__(f"Unsupported root system family {family!r}.")
        self.family = family


class InvalidRootSystem(_E):
    """A set of vectors violates one of the root system axioms."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"Not a root system: {reason}.")
        self.reason = reason


class NonFiniteGroup(_E):
    """Group closure produced more elements than the configured cap."""

    def __init__(self, max_order: int) -> None:
        super().__init__(
            f"Group closure exceeded {max_order} elements; the generators "
            "do not generate a finite group within the cap."
        )
        self.max_order = max_order


class DegenerateOrderVector(_E):
    """No order vector off every root hyperplane was found."""

    def __init__(self, retries: int) -> None:
        super().__init__(
            f"Order vector stayed orthogonal to a root after {retries} "
            "retries."
        )
        self.retries = retries


class RankDeficient(_E):
    """A matrix that must be invertible is singular."""

    def __init__(self, what: str) -> None:
        super().__init__(f"{what} is singular.")
        self.what = what


class FrameMismatch(_E):
    """Two regions (or a region and a lattice) use different frames."""

    def __init__(self) -> None:
        super().__init__("Operands are expressed in different frames.")


class ZeroScaleFactor(_E):
    """A diagonal scaling had a zero factor."""

    def __init__(self, factors: Any) -> None:
        super().__init__(f"Scale factors {factors} contain zero.")
        self.factors = factors


class LatticeIncompatible(_E):
    """A lattice cannot be used for the requested operation."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"Incompatible lattice: {reason}.")
        self.reason = reason


class UnsupportedTransform(_E):
    """A region transform needs a frame-diagonal dilation."""

    def __init__(self) -> None:
        super().__init__(
            "The dilation is not diagonal in the region's frame."
        )


class SearchRadiusExceeded(_E):
    """Too many lattice translates would have to be examined."""

    def __init__(self, count: int, limit: int) -> None:
        super().__init__(
            f"Translate search needs {count} lattice vectors, limit is "
            f"{limit}."
        )
        self.count = count
        self.limit = limit


class NonExpansive(_E):
    """A dilation matrix has an eigenvalue of modulus at most one."""

    def __init__(self, moduli: Any) -> None:
        super().__init__(
            f"Dilation is not expansive (|eigenvalues| {moduli})."
        )
        self.moduli = moduli


class UnsupportedParameter(_E):
    """A construction parameter is outside the supported range."""

    def __init__(self, name: str, value: Any) -> None:
        super().__init__(f"Unsupported value {value!r} for {name}.")
        self.name = name
        self.value = value


class EmptyWindow(_E):
    """The sampling window has zero volume."""

    def __init__(self) -> None:
        super().__init__("The sampling window is empty.")


class IncompletePlan(_E):
    """Samples required by the truncated sampling series are missing."""

    def __init__(self, missing: int) -> None:
        super().__init__(f"{missing} required samples are missing.")
        self.missing = missing


class StraddlingBox(_E):
    """A spectrum box is not contained in a single closed chamber."""

    def __init__(self, box: Any) -> None:
        super().__init__(
            f"Spectrum box {box} crosses a chamber wall; subdivide it."
        )
        self.box = box


class OutsideDualCone(_E):
    """A tube-domain imaginary part is not inside the open dual cone."""

    def __init__(self, y: Any) -> None:
        super().__init__(f"{y} is not inside the open dual cone.")
        self.y = y


class InvalidConfig(_E):
    """A scene configuration could not be parsed."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"Invalid config: {reason}.")
        self.reason = reason


class InvalidDocument(_E):
    """A JSON document has the wrong kind or shape."""

    def __init__(self, reason: str) -> None:
        super().__init__(f"Invalid document: {reason}.")
        self.reason = reason


class OutsideBand(_E):
    """A signal's spectrum is not inside the band of a sampling plan."""

    def __init__(self, excess: float) -> None:
        super().__init__(
            f"Signal spectrum leaves the plan's band by volume {excess}."
        )
        self.excess = excess


class NotASpectrum(_E):
    """A sampling lattice does not give orthogonal exponentials on P."""

    def __init__(self, defect: float, tolerance: float) -> None:
        super().__init__(
            f"Largest off-diagonal Gram entry {defect} exceeds {tolerance}."
        )
        self.defect = defect
        self.tolerance = tolerance
