"""The smooth potential well and the per-energy quantities derived from it.

The well is flat (``-v0``) on ``x0 <= x <= 0`` and relaxes exponentially to
zero on both sides with decay length ``a``::

    V(x) = -v0 * exp((x - x0)/a)   x < x0        (region I)
           -v0                     x0 <= x <= 0  (region II)
           -v0 * exp(-x/a)         x > 0         (region III)

``a -> 0`` gives the square well of width ``|x0|``; ``x0 = 0`` gives the cusp
well, in which region II shrinks to the single point ``x = 0``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameter, OutOfWindow

__all__ = [
    "PotentialParams",
    "Region",
    "EnergyQuantities",
    "potential_value",
    "region_of",
    "energy_quantities",
]


@dataclass(frozen=True)
class PotentialParams:
    """Depth ``v0 > 0``, smoothness ``a > 0`` and width marker ``x0 <= 0``."""

    v0: float
    a: float
    x0: float

    def __post_init__(self):
        for name in ("v0", "a", "x0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameter(f"{name} must be finite, got {value}")
        if self.v0 <= 0:
            raise InvalidParameter(f"v0 must be > 0, got {self.v0}")
        if self.a <= 0:
            raise InvalidParameter(f"a must be > 0, got {self.a}")
        if self.x0 > 0:
            raise InvalidParameter(f"x0 must be <= 0, got {self.x0}")

    @property
    def width(self) -> float:
        return -self.x0

    @property
    def is_cusp(self) -> bool:
        return self.x0 == 0


class Region(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


def potential_value(params: PotentialParams, x: float) -> float:
    if x < params.x0:
        return -params.v0 * math.exp((x - params.x0) / params.a)
    if x <= 0:
        return -params.v0
    return -params.v0 * math.exp(-x / params.a)


def region_of(params: PotentialParams, x: float) -> Region:
    # both interfaces belong to the closed middle interval
    if x < params.x0:
        return Region.I
    if x <= 0:
        return Region.II
    return Region.III


@dataclass(frozen=True)
class EnergyQuantities:
    """Indices and wave numbers that depend on the energy.

    Attributes
    ----------
    e : float
        Energy (units of the particle mass).
    kappa : complex
        Whittaker index ``-i a E``.
    mu : float
        Whittaker index ``a sqrt(1 - E^2)``.
    q : complex
        Wave number in the flat bottom, principal ``sqrt((E + v0)^2 - 1)``;
        purely imaginary when ``|E + v0| < 1``.
    lam : float
        Asymptotic decay rate ``sqrt(1 - E^2)``, equal to ``mu / a``.
    """

    e: float
    kappa: complex
    mu: float
    q: complex
    lam: float


def energy_quantities(params: PotentialParams, e: float) -> EnergyQuantities:
    if not abs(e) < 1:
        raise OutOfWindow(f"bound states need |E| < 1, got E = {e}")
    lam = math.sqrt((1 - e) * (1 + e))
    q = cmath.sqrt(complex((e + params.v0) ** 2 - 1))
    return EnergyQuantities(
        e=e,
        kappa=complex(0.0, -params.a * e),
        mu=params.a * lam,
        q=q,
        lam=lam,
    )
