"""Half-integer spin labels and canonical phase-space angles.

Spin numbers and magnetic quantum numbers are stored as twice their value
so that J = 5/2 is the exact integer 5.  No floating-point J anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class HalfInteger:
    """An integer or half-integer quantum number stored as 2x its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int):
            raise DomainError("specialfn", f"twice-value must be an integer, got {self.twice!r}")

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def check_magnitude(self, what: str = "J") -> "HalfInteger":
        if self.twice < 0:
            raise DomainError("specialfn", f"{what} must be >= 0, got {self}")
        return self


def half_integer(x) -> HalfInteger:
    """Coerce an int, exact half-integer float, 'a/2' string, or HalfInteger."""
    if isinstance(x, HalfInteger):
        return x
    if isinstance(x, bool):
        raise DomainError("specialfn", "booleans are not spin numbers")
    if isinstance(x, int):
        return HalfInteger(2 * x)
    if isinstance(x, float):
        twice = 2.0 * x
        if not twice.is_integer():
            raise DomainError("specialfn", f"{x} is not an integer or half-integer")
        return HalfInteger(int(twice))
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if den.strip() != "2":
                raise DomainError("specialfn", f"cannot parse half-integer {x!r}")
            return HalfInteger(int(num))
        return half_integer(float(text) if "." in text else int(text))
    raise DomainError("specialfn", f"cannot interpret {x!r} as a half-integer")


@dataclass(frozen=True)
class RotationAngles:
    """Polar/azimuthal rotation angles with theta in [0, pi], phi in [0, 2*pi)."""

    theta: float
    phi: float

    @staticmethod
    def canonical(theta: float, phi: float) -> "RotationAngles":
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError("specialfn", f"angles must be finite, got ({theta}, {phi})")
        theta = math.fmod(theta, 2.0 * math.pi)
        if theta < 0.0:
            theta += 2.0 * math.pi
        if theta > math.pi:
            theta = 2.0 * math.pi - theta
            phi = phi + math.pi
        phi = math.fmod(phi, 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        return RotationAngles(theta, phi)


def as_angles(angles) -> RotationAngles:
    """Coerce a RotationAngles or (theta, phi) pair, canonicalizing ranges."""
    if isinstance(angles, RotationAngles):
        return angles
    theta, phi = angles
    return RotationAngles.canonical(float(theta), float(phi))
