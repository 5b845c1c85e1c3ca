"""Independent checks: direct integration of the stationary equation and limit cases.

Nothing in this module touches the special functions.  The shooting
solutions start from the pure exponential asymptote ``exp(-lambda |x|)`` far
outside the well and are integrated inward with an adaptive embedded
Runge-Kutta pair (Dormand-Prince 8(5,3)) to ``x = 0``, where the Wronskian of
the left and right solutions vanishes exactly at an eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import IntegrationFailure, InvalidParameter, OutOfWindow
from .potential import PotentialParams, potential_value
from .spectrum import ScanConfig, energy_grid, find_roots

__all__ = [
    "IntegratorConfig",
    "shooting_solutions",
    "shooting_mismatch",
    "shooting_eigenvalues",
    "square_well_condition",
    "square_well_eigenvalues",
    "cusp_limit_check",
]


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and reach of the shooting integration.

    ``span_decay_lengths`` sets the starting points ``x0 - span`` and ``+span``
    with ``span = span_decay_lengths / lambda``; a fixed ``x_span`` overrides it.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    span_decay_lengths: float = 40.0
    x_span: float | None = None
    max_steps: int = 200_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise InvalidParameter("integrator tolerances must be positive")
        if self.x_span is not None and not self.x_span > 0:
            raise InvalidParameter(f"x_span must be positive, got {self.x_span}")
        if not self.span_decay_lengths > 0:
            raise InvalidParameter("span_decay_lengths must be positive")

    def span(self, lam: float) -> float:
        return self.x_span if self.x_span is not None else self.span_decay_lengths / lam


def _rhs(e: float, params: PotentialParams):
    def f(x, y):
        k2 = (e - potential_value(params, x)) ** 2 - 1.0
        return [y[1], -k2 * y[0]]

    return f


def _integrate(e, params, x_start, x_stop, y_start, cfg: IntegratorConfig, dense: bool):
    # one step per unit of reach is generous; the cap turns a stall into an error
    first_step = min(abs(x_stop - x_start) / 100.0, 0.1)
    sol = solve_ivp(
        _rhs(e, params),
        (x_start, x_stop),
        y_start,
        method="DOP853",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        dense_output=dense,
        first_step=first_step,
    )
    if not sol.success or sol.t.size > cfg.max_steps:
        raise IntegrationFailure(f"shooting at E={e} failed: {sol.message}")
    return sol


def shooting_solutions(e: float, params: PotentialParams, cfg: IntegratorConfig = IntegratorConfig(), dense: bool = False):
    """Left and right decaying solutions integrated to ``x = 0``.

    Returns the two ``solve_ivp`` results (left first).
    """
    if not abs(e) < 1:
        raise OutOfWindow(f"bound states need |E| < 1, got E = {e}")
    lam = math.sqrt((1 - e) * (1 + e))
    span = cfg.span(lam)
    left = _integrate(e, params, params.x0 - span, 0.0, [1.0, lam], cfg, dense)
    right = _integrate(e, params, span, 0.0, [1.0, -lam], cfg, dense)
    return left, right


def shooting_mismatch(e: float, params: PotentialParams, cfg: IntegratorConfig = IntegratorConfig()) -> float:
    """Normalised Wronskian of the left and right decaying solutions at ``x = 0``.

    Each solution is normalised by the Euclidean length of its state vector
    ``(phi, phi')``, so the result is bounded by one in magnitude.
    """
    left, right = shooting_solutions(e, params, cfg)
    phi_l, dphi_l = left.y[:, -1]
    phi_r, dphi_r = right.y[:, -1]
    wronskian = phi_l * dphi_r - dphi_l * phi_r
    return float(wronskian / (math.hypot(phi_l, dphi_l) * math.hypot(phi_r, dphi_r)))


def shooting_eigenvalues(
    params: PotentialParams,
    scan: ScanConfig = ScanConfig(grid_points=400),
    cfg: IntegratorConfig = IntegratorConfig(),
) -> list[float]:
    """Sign changes of :func:`shooting_mismatch` on the scan grid, refined by Brent's method."""
    grid = energy_grid(scan)
    values = [shooting_mismatch(float(e), params, cfg) for e in grid]
    roots = []
    for lo, hi, f_lo, f_hi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_lo == 0.0:
            roots.append(float(lo))
        elif f_lo * f_hi < 0:
            root = brentq(lambda e: shooting_mismatch(e, params, cfg), lo, hi, xtol=1e-12, rtol=1e-15)
            roots.append(float(root))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def square_well_condition(e: float, v0: float, width: float) -> float:
    """Bound-state condition of the square well of depth ``v0`` and width ``width``.

    ``tan(q w) (q^2 - lambda^2) - 2 lambda q`` with ``q = sqrt((e + v0)^2 - 1)``
    and ``lambda = sqrt(1 - e^2)``.  For ``(e + v0)^2 < 1`` there is no
    oscillatory region; the function is then ``-(tanh(s w)(s^2 + lambda^2) +
    2 lambda s)`` with ``q = i s``, the imaginary part of the same expression,
    which never vanishes.
    """
    if not abs(e) < 1:
        raise OutOfWindow(f"bound states need |E| < 1, got E = {e}")
    if not width > 0:
        raise InvalidParameter(f"width must be positive, got {width}")
    lam = math.sqrt((1 - e) * (1 + e))
    q2 = (e + v0) ** 2 - 1
    if q2 >= 0:
        q = math.sqrt(q2)
        return math.tan(q * width) * (q2 - lam * lam) - 2 * lam * q
    s = math.sqrt(-q2)
    return -(math.tanh(s * width) * (s * s + lam * lam) + 2 * lam * s)


def _square_well_regular(e: float, v0: float, width: float) -> float:
    # cos(qw)/q times the condition: no poles, and no spurious zero at q = 0
    lam = math.sqrt((1 - e) * (1 + e))
    q2 = (e + v0) ** 2 - 1
    if q2 >= 0:
        q = math.sqrt(q2)
        t = q * width
        sinc = math.sin(t) / q if t > 1e-8 else width
        return sinc * (q2 - lam * lam) - 2 * lam * math.cos(t)
    s = math.sqrt(-q2)
    t = s * width
    sinhc = math.sinh(t) / s if t > 1e-8 else width
    return -(sinhc * (s * s + lam * lam) + 2 * lam * math.cosh(t))


def square_well_eigenvalues(v0: float, width: float, scan: ScanConfig = ScanConfig()) -> list[float]:
    """Zeros of the square-well condition inside the scan window."""
    grid = energy_grid(scan)
    values = [_square_well_regular(float(e), v0, width) for e in grid]
    roots = []
    for lo, hi, f_lo, f_hi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_lo * f_hi < 0:
            roots.append(float(brentq(_square_well_regular, lo, hi, args=(v0, width), xtol=1e-14)))
    return roots


def cusp_limit_check(v0: float, a: float, scan: ScanConfig = ScanConfig()) -> list[float]:
    """Eigenvalues of the cusp well (``x0 = 0``) from the analytic matching.

    Meant to be compared with :func:`shooting_eigenvalues` at ``x0 = 0``.
    """
    return [float(e) for e in find_roots(PotentialParams(v0, a, 0.0), scan)]
