"""Region-wise regular solutions and the bound-state matching condition.

With ``y0 = 2 i a v0`` the regular solutions are

    region I   : phi_I(x)   = b1 * y^(-1/2) M_{kappa,mu}(y),  y = y0 exp((x - x0)/a)
    region II  : phi_II(x)  = b3 exp(-i q x) + b4 exp(i q x)
    region III : phi_III(x) = b5 * z^(-1/2) M_{kappa,mu}(z),  z = y0 exp(-x/a)

Because the well is symmetric about ``x0/2``, ``phi_III(x)`` (with ``b5 = 1``)
is exactly ``phi_I(x0 - x)`` (with ``b1 = 1``).  Writing ``A`` and ``B`` for the
value and slope of the region-I solution at ``x0``, region III starts at
``x = 0`` with value ``A`` and slope ``-B``.  Carrying ``(A, B)`` across the
flat bottom with the transfer matrix of ``cos(q x)``, ``sin(q x)/q`` and
requiring it to be parallel to ``(A, -B)`` gives the determinant

    D(E) = -[2 A B cos(q d) + (B^2/q - q A^2) sin(q d)],   d = -x0.

``D`` is an entire function of ``q^2``, so it has no spurious zero at
``q = 0`` (where the plane-wave pair ``exp(+-i q x)`` degenerates).  The
closed form written with ``M_{kappa,mu}`` and ``M_{1+kappa,mu}`` equals
``2 i q y0 exp(-i q x0) D(E)``; :func:`closed_form_condition` evaluates it
for comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InvalidParameter, NotAnEigenvalue
from .potential import (
    EnergyQuantities,
    PotentialParams,
    Region,
    energy_quantities,
    region_of,
)
from .specfun import (
    DEFAULT_POLICY,
    SeriesPolicy,
    kummer_m,
    kummer_m_derivative,
    whittaker_m,
)

__all__ = [
    "MatchedWavefunction",
    "EigenvalueResidual",
    "ROOT_TOLERANCE",
    "phi_region1",
    "phi_region2",
    "phi_region3",
    "boundary_data",
    "eigenvalue_function",
    "closed_form_condition",
    "match_coefficients",
    "continuity_residual",
    "wavefunction_eval",
    "wavefunction_with_derivative",
]

# |D| / scale below which an energy counts as an eigenvalue
ROOT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class EigenvalueResidual:
    """Matching determinant at one energy.

    ``scale`` bounds the sum of the magnitudes of the terms of the
    determinant, so ``relative = |value| / scale`` lies in ``[0, 1]``.
    """

    value: complex
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale


@dataclass(frozen=True)
class MatchedWavefunction:
    """Eigenstate coefficients under the convention ``b4 = 1``."""

    e: float
    params: PotentialParams
    b1: complex
    b3: complex
    b4: complex
    b5: complex

    def scaled(self, c: complex) -> "MatchedWavefunction":
        return MatchedWavefunction(
            self.e, self.params, c * self.b1, c * self.b3, c * self.b4, c * self.b5
        )


def _outer_solution(eq: EnergyQuantities, params: PotentialParams, s: float, policy):
    """Regular outer solution with unit coefficient at signed distance ``s <= 0`` from the edge.

    Returns the value and the derivative with respect to ``s``.  Written as
    ``y0^mu exp(lam s) exp(-y/2) M(mu - kappa + 1/2, 1 + 2 mu, y)``, which is
    ``y^(-1/2) M_{kappa,mu}(y)`` on the principal branch but stays finite when
    ``y = y0 exp(s/a)`` underflows far out in the tail.
    """
    a = params.a
    y0 = complex(0.0, 2.0 * a * params.v0)
    y = y0 * math.exp(s / a)
    ka = eq.mu - eq.kappa + 0.5
    kb = 1.0 + 2.0 * eq.mu
    m = kummer_m(ka, kb, y, policy)
    dm = kummer_m_derivative(ka, kb, y, policy)
    envelope = cmath.exp(eq.mu * cmath.log(y0) + eq.lam * s - y / 2)
    phi = envelope * m
    dphi = envelope * ((eq.lam - y / (2 * a)) * m + (y / a) * dm)
    return phi, dphi


def phi_region1(e: float, params: PotentialParams, x: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """Regular region-I solution (``b1 = 1``) and its x-derivative at ``x <= x0``."""
    if x > params.x0:
        raise InvalidParameter(f"region I needs x <= x0 = {params.x0}, got {x}")
    eq = energy_quantities(params, e)
    return _outer_solution(eq, params, x - params.x0, policy)


def phi_region2(e: float, params: PotentialParams, x: float, b3: complex, b4: complex):
    """Plane-wave combination ``b3 exp(-iqx) + b4 exp(iqx)`` and its derivative."""
    q = energy_quantities(params, e).q
    minus = b3 * cmath.exp(-1j * q * x)
    plus = b4 * cmath.exp(1j * q * x)
    return minus + plus, 1j * q * (plus - minus)


def phi_region3(e: float, params: PotentialParams, x: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """Regular region-III solution (``b5 = 1``) and its x-derivative at ``x >= 0``."""
    if x < 0:
        raise InvalidParameter(f"region III needs x >= 0, got {x}")
    eq = energy_quantities(params, e)
    phi, dphi = _outer_solution(eq, params, -x, policy)
    return phi, -dphi


def boundary_data(e: float, params: PotentialParams, policy: SeriesPolicy = DEFAULT_POLICY):
    """Value ``A`` and slope ``B`` of the region-I solution at ``x = x0``."""
    return phi_region1(e, params, params.x0, policy)


def _sin_over_q(q: complex, d: float) -> complex:
    t = q * d
    if abs(t) < 1e-4:
        t2 = t * t
        return d * (1 - t2 / 6 + t2 * t2 / 120)
    return cmath.sin(t) / q


def eigenvalue_function(e: float, params: PotentialParams, policy: SeriesPolicy = DEFAULT_POLICY) -> EigenvalueResidual:
    """Matching determinant whose zeros in ``(-1, 1)`` are the bound-state energies.

    For ``x0 = 0`` the flat bottom is absent and the determinant reduces to
    ``-2 A B``, the Wronskian of the region-I and region-III solutions at the
    cusp: even states have ``B = 0``, odd states ``A = 0``.
    """
    eq = energy_quantities(params, e)
    A, B = boundary_data(e, params, policy)
    d = params.width
    q2 = eq.q * eq.q
    c = cmath.cos(eq.q * d)
    sn = _sin_over_q(eq.q, d)
    value = -(2 * A * B * c + (B * B - q2 * A * A) * sn)
    scale = (abs(A) + abs(B)) ** 2 * (abs(c) + abs(sn) + abs(q2 * sn))
    return EigenvalueResidual(value=value, scale=scale)


def closed_form_condition(
    e: float,
    params: PotentialParams,
    squared_function: bool = False,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> complex:
    """Eigenvalue condition written with ``M_{kappa,mu}(y0)`` and ``M_{1+kappa,mu}(y0)``.

    ``squared_function=True`` squares ``M_{1+kappa,mu}(y0)`` inside the first
    bracket instead of squaring the bracket.  That reading does not vanish at
    the bound-state energies and is kept only so it can be checked against.
    """
    eq = energy_quantities(params, e)
    a, v0, q = params.a, params.v0, eq.q
    y0 = complex(0.0, 2.0 * a * v0)
    m0 = whittaker_m(eq.kappa, eq.mu, y0, policy)
    m1 = whittaker_m(eq.kappa + 1, eq.mu, y0, policy)
    weight = 1 + 2 * eq.kappa + 2 * eq.mu
    first = (1 + 2 * eq.kappa + 2j * a * (q - v0)) * m0 - weight * (m1 * m1 if squared_function else m1)
    second = (1 + 2 * eq.kappa - 2j * a * (q + v0)) * m0 - weight * m1
    phase = cmath.exp(-2j * params.x0 * q)
    return (first * first - phase * second * second) / (4 * a * a)


def match_coefficients(
    e: float,
    params: PotentialParams,
    tol: float = ROOT_TOLERANCE,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> MatchedWavefunction:
    """Solve the continuity conditions for ``b1``, ``b3``, ``b5`` with ``b4 = 1``.

    Raises
    ------
    NotAnEigenvalue
        If ``|D(e)| / scale > tol``, i.e. the four continuity conditions are
        inconsistent, or if ``e`` sits on the degenerate point ``q = 0`` where
        the plane-wave coefficients are not defined.
    """
    residual = eigenvalue_function(e, params, policy)
    if residual.relative > tol:
        raise NotAnEigenvalue(
            f"E = {e!r} leaves a matching residual {residual.relative:.3e} > {tol:.1e}"
        )
    q = energy_quantities(params, e).q
    A, B = boundary_data(e, params, policy)
    denominator = 1j * q * A - B
    if abs(q) < 1e-12 or abs(denominator) <= 1e-14 * (abs(q * A) + abs(B)):
        raise NotAnEigenvalue(
            f"E = {e!r} has no representation with b4 = 1 (degenerate plane-wave basis)"
        )
    b4 = 1.0 + 0.0j
    b3 = (1j * q * A + B) / denominator

    # x = 0: region II must be parallel to (A, -B)
    w0 = (b3 + b4, 1j * q * (b4 - b3))
    b5 = (A.conjugate() * w0[0] - B.conjugate() * w0[1]) / (abs(A) ** 2 + abs(B) ** 2)
    # x = x0: region II must be parallel to (A, B)
    w1 = phi_region2(e, params, params.x0, b3, b4)
    b1 = (A.conjugate() * w1[0] + B.conjugate() * w1[1]) / (abs(A) ** 2 + abs(B) ** 2)
    return MatchedWavefunction(e=e, params=params, b1=b1, b3=b3, b4=b4, b5=b5)


def wavefunction_with_derivative(state: MatchedWavefunction, x: float, policy: SeriesPolicy = DEFAULT_POLICY):
    region = region_of(state.params, x)
    if region is Region.I:
        phi, dphi = phi_region1(state.e, state.params, x, policy)
        return state.b1 * phi, state.b1 * dphi
    if region is Region.II:
        return phi_region2(state.e, state.params, x, state.b3, state.b4)
    phi, dphi = phi_region3(state.e, state.params, x, policy)
    return state.b5 * phi, state.b5 * dphi


def wavefunction_eval(state: MatchedWavefunction, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    return wavefunction_with_derivative(state, x, policy)[0]


def continuity_residual(state: MatchedWavefunction, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Largest relative jump of ``phi`` or ``phi'`` across ``x0`` and ``0``."""
    p = state.params
    worst = 0.0
    inner_at_x0 = phi_region2(state.e, p, p.x0, state.b3, state.b4)
    inner_at_0 = phi_region2(state.e, p, 0.0, state.b3, state.b4)
    outer_left = phi_region1(state.e, p, p.x0, policy)
    outer_right = phi_region3(state.e, p, 0.0, policy)
    pairs = (
        (inner_at_x0, (state.b1 * outer_left[0], state.b1 * outer_left[1])),
        (inner_at_0, (state.b5 * outer_right[0], state.b5 * outer_right[1])),
    )
    for inner, outer in pairs:
        for u, v in zip(inner, outer):
            worst = max(worst, abs(u - v) / max(1.0, abs(u)))
    return worst
