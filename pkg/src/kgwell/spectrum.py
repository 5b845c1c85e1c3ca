"""Bound-state search, Klein-Gordon norm, sweeps and the critical potential."""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import BracketInvalid, InvalidParameter, NotAnEigenvalue, QuadratureFailure
from .matching import (
    ROOT_TOLERANCE,
    MatchedWavefunction,
    eigenvalue_function,
    match_coefficients,
    wavefunction_eval,
)
from .potential import PotentialParams, energy_quantities, potential_value
from .specfun import DEFAULT_POLICY, SeriesPolicy

__all__ = [
    "NORM_TOLERANCE",
    "StateKind",
    "BoundState",
    "ScanConfig",
    "SpectrumPoint",
    "SpectrumCurve",
    "CriticalPoint",
    "energy_grid",
    "find_roots",
    "find_bound_states",
    "nearest_root",
    "classify",
    "kg_norm",
    "count_nodes",
    "deep_branch",
    "sweep_v0",
    "critical_potential",
    "antiparticle_onset",
    "sweep_x0",
]

NORM_TOLERANCE = 1e-3
DEDUP_TOLERANCE = 1e-9
TAIL_DECAY_LENGTHS = 40.0


class StateKind(enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"
    CRITICAL = "critical"


def classify(norm: float, tol: float = NORM_TOLERANCE) -> StateKind:
    if norm > tol:
        return StateKind.PARTICLE
    if norm < -tol:
        return StateKind.ANTIPARTICLE
    return StateKind.CRITICAL


@dataclass(frozen=True)
class BoundState:
    e: float
    norm: float
    kind: StateKind


@dataclass(frozen=True)
class ScanConfig:
    """Energy window and grid used to bracket roots.

    The ``grid_points`` energies are spaced uniformly in ``theta`` with
    ``E = mid - half * cos(theta)``, which crowds them towards both ends of the
    window where states enter from the continua.
    """

    e_min: float = -1 + 1e-6
    e_max: float = 1 - 1e-6
    grid_points: int = 2000
    refine_tol: float = 1e-10

    def __post_init__(self):
        if not self.e_min < self.e_max:
            raise InvalidParameter(f"need e_min < e_max, got {self.e_min}, {self.e_max}")
        if self.e_min <= -1 or self.e_max >= 1:
            raise InvalidParameter("the scan window must lie inside (-1, 1)")
        if self.grid_points < 2:
            raise InvalidParameter(f"grid_points must be >= 2, got {self.grid_points}")
        if not self.refine_tol > 0:
            raise InvalidParameter(f"refine_tol must be positive, got {self.refine_tol}")


def energy_grid(scan: ScanConfig) -> np.ndarray:
    mid = 0.5 * (scan.e_max + scan.e_min)
    half = 0.5 * (scan.e_max - scan.e_min)
    theta = np.linspace(0.0, math.pi, scan.grid_points)
    grid = mid - half * np.cos(theta)
    grid[0], grid[-1] = scan.e_min, scan.e_max
    return grid


# ---------------------------------------------------------------------------
# root search


def _golden_minimum(f: Callable[[float], float], lo: float, hi: float, xtol: float):
    """Golden-section search; tolerates the kink of |D| at a simple root."""
    invphi = (math.sqrt(5) - 1) / 2
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    # never ask for less than a few ulps of the abscissa
    xtol = max(xtol, 4 * np.spacing(max(abs(lo), abs(hi))))
    for _ in range(200):
        if hi - lo <= xtol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _is_root(residual, e, r, xtol):
    # below tolerance and a genuine minimum: near coalescence a whole bracket
    # edge can sit below ROOT_TOLERANCE without being a zero
    if r > ROOT_TOLERANCE:
        return False
    step = max(10 * xtol, 1e-11)
    return residual(e - step) > r and residual(e + step) > r


def _polish_bracket(residual, lo, hi, xtol, window):
    """Roots of ``residual``: the minimum in ``[lo, hi]`` plus deflated neighbours in ``window``.

    Two roots close to coalescence can share a single grid minimum, or leave
    none at all for the second one; dividing out the first root exposes the
    other, which is searched for on each side of it.
    """
    e1, r1 = _golden_minimum(residual, lo, hi, xtol)
    if not _is_root(residual, e1, r1, xtol):
        return []
    roots = [e1]

    def deflated(e):
        gap = abs(e - e1)
        return residual(e) / gap if gap > 0 else math.inf

    for left, right in ((window[0], e1), (e1, window[1])):
        if right - left <= xtol:
            continue
        e2, _ = _golden_minimum(deflated, left, right, xtol)
        r2 = residual(e2)
        if abs(e2 - e1) > DEDUP_TOLERANCE and _is_root(residual, e2, r2, xtol):
            # a genuine second root is separated from the first by a bump in |D|
            bump = residual(0.5 * (e1 + e2))
            if bump > 10 * max(r1, r2):
                roots.append(e2)
    return roots


def find_roots(
    params: PotentialParams,
    scan: ScanConfig = ScanConfig(),
    seeds: Sequence[float] = (),
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> list[float]:
    """Zeros of the matching determinant in the scan window, sorted ascending.

    ``seeds`` are energies (e.g. roots at a neighbouring potential depth)
    around which an extra bracket is polished; they can only add roots the
    grid missed.
    """

    def residual(e: float) -> float:
        return eigenvalue_function(e, params, policy).relative

    grid = energy_grid(scan)
    values = np.array([residual(e) for e in grid])
    n = len(grid)
    brackets = []
    for i in range(n):
        left = values[i - 1] if i > 0 else math.inf
        right = values[i + 1] if i < n - 1 else math.inf
        if values[i] <= left and values[i] <= right:
            window = (grid[max(i - 3, 0)], grid[min(i + 3, n - 1)])
            # each side separately: a close pair can straddle the grid minimum
            if i > 0:
                brackets.append((grid[i - 1], grid[i], window))
            if i < n - 1:
                brackets.append((grid[i], grid[i + 1], window))
    for seed in seeds:
        if scan.e_min < seed < scan.e_max:
            i = int(np.searchsorted(grid, seed))
            window = (grid[max(i - 3, 0)], grid[min(i + 2, n - 1)])
            brackets.append((grid[max(i - 1, 0)], grid[min(i, n - 1)], window))

    found = []
    for lo, hi, window in brackets:
        found.extend(_polish_bracket(residual, lo, hi, scan.refine_tol * 1e-3, window))
    return _dedup(found)


def nearest_root(params: PotentialParams, e: float, radius: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Energy of smallest matching residual within ``radius`` of ``e``.

    The result is not guaranteed to be an eigenvalue; pass it to
    :func:`~kgwell.matching.match_coefficients` to have that checked.
    """
    lo = max(e - radius, -1 + 1e-12)
    hi = min(e + radius, 1 - 1e-12)
    if not lo < hi:
        raise InvalidParameter(f"no part of [{e - radius}, {e + radius}] lies inside (-1, 1)")
    best, _ = _golden_minimum(lambda x: eigenvalue_function(x, params, policy).relative, lo, hi, 1e-15)
    return best


def _dedup(energies):
    out = []
    for e in sorted(energies):
        if not out or e - out[-1] > DEDUP_TOLERANCE:
            out.append(float(e))
    return out


# ---------------------------------------------------------------------------
# Klein-Gordon norm


def _segment_edges(start: float, stop: float, shortest: float) -> list[float]:
    """Break points from ``start`` towards ``stop`` with geometrically shrinking segments."""
    length = abs(stop - start)
    direction = 1.0 if stop > start else -1.0
    edges = [start]
    remaining = length
    while remaining > 2 * shortest:
        remaining /= 2
        edges.append(stop - direction * remaining)
    edges.append(stop)
    return edges


def kg_norm(
    state: MatchedWavefunction,
    policy: SeriesPolicy = DEFAULT_POLICY,
    rel_err: float = 1e-8,
    abs_err: float = 0.0,
) -> float:
    """Klein-Gordon norm ``N = 2 * integral (E - V) |phi|^2 dx``.

    Each region is integrated with adaptive Gauss-Kronrod quadrature out to
    ``40/lambda`` beyond the well edges; the remaining exponential tails are
    added in closed form.  The summed quadrature error estimates plus the tail
    terms must stay below ``rel_err * |N|``, or below ``abs_err`` when that is
    larger (a relative certificate is out of reach for the zero-norm state at
    the critical point).

    Raises
    ------
    QuadratureFailure
        If the adaptive refinement stalls or the error certificate fails.
    """
    p = state.params
    e = state.e
    lam = energy_quantities(p, e).lam
    reach = TAIL_DECAY_LENGTHS / lam

    def density(x):
        phi = wavefunction_eval(state, x, policy)
        return 2.0 * (e - potential_value(p, x)) * (phi.real ** 2 + phi.imag ** 2)

    pieces = [
        _segment_edges(p.x0 - reach, p.x0, p.a),
        [p.x0, 0.0] if p.x0 < 0 else [],
        _segment_edges(reach, 0.0, p.a)[::-1],
    ]
    total = 0.0
    error = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for edges in pieces:
            for lo, hi in zip(edges[:-1], edges[1:]):
                try:
                    value, abserr = integrate.quad(density, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
                except integrate.IntegrationWarning as exc:
                    raise QuadratureFailure(f"quadrature on [{lo:.6g}, {hi:.6g}] failed: {exc}") from exc
                total += value
                error += abserr
    # beyond the cut-offs |phi|^2 ~ exp(-2 lam |x|) and E - V ~ E
    for x_end in (p.x0 - reach, reach):
        tail = density(x_end) / (2.0 * lam)
        total += tail
        error += abs(tail)
    if error > max(rel_err * abs(total), abs_err) and error > 1e-300:
        raise QuadratureFailure(
            f"norm error certificate {error:.3e} exceeds {rel_err:.0e} * |N| = {rel_err * abs(total):.3e}"
        )
    return total


def count_nodes(state: MatchedWavefunction, points: int = 801, policy: SeriesPolicy = DEFAULT_POLICY) -> int:
    """Number of sign changes of the (phase-rotated) wavefunction.

    Nodes can only sit where ``(E - V)^2 > 1``, i.e. where ``V < E - 1``;
    outside that interval the decaying solution is monotone.
    """
    p, e = state.params, state.e
    if p.v0 <= 1 - e:
        return 0
    reach = p.a * math.log(p.v0 / (1 - e))
    xs = np.linspace(p.x0 - reach - 0.05, reach + 0.05, points)
    phi = np.array([wavefunction_eval(state, float(x), policy) for x in xs])
    k = int(np.argmax(np.abs(phi)))
    real = (phi * np.conj(phi[k]) / abs(phi[k])).real
    significant = real[np.abs(real) > 1e-9 * np.max(np.abs(real))]
    return int(np.count_nonzero(np.signbit(significant[1:]) != np.signbit(significant[:-1])))


def find_bound_states(
    params: PotentialParams,
    scan: ScanConfig = ScanConfig(),
    seeds: Sequence[float] = (),
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> list[BoundState]:
    """All bound states in the scan window with their norms, ascending in energy."""
    states = []
    for e in find_roots(params, scan, seeds, policy):
        norm = kg_norm(match_coefficients(e, params, policy=policy), policy)
        states.append(BoundState(e=e, norm=norm, kind=classify(norm)))
    return states


def deep_branch(params: PotentialParams, scan: ScanConfig = ScanConfig(), roots=None) -> list[float]:
    """Energies of the nodeless states: the particle ground state and its antiparticle partner.

    These two coalesce at the critical potential; no nodeless state survives
    beyond it.
    """
    if roots is None:
        roots = find_roots(params, scan)
    deep = []
    for e in roots[:3]:
        try:
            state = match_coefficients(e, params)
        except NotAnEigenvalue:
            continue
        if count_nodes(state) == 0:
            deep.append(e)
    return deep


# ---------------------------------------------------------------------------
# sweeps over the depth


@dataclass
class SpectrumPoint:
    v0: float
    states: list[BoundState]
    branch_ids: list[int] = field(default_factory=list)


@dataclass
class SpectrumCurve:
    a: float
    x0: float
    points: list[SpectrumPoint]


def _assign_branches(previous: SpectrumPoint | None, states: list[BoundState], next_id: int, max_jump: float = 0.1):
    if previous is None:
        return list(range(next_id, next_id + len(states))), next_id + len(states)
    used = set()
    ids = []
    for state in states:
        best, best_gap = None, max_jump
        for old, old_id in zip(previous.states, previous.branch_ids):
            if old_id in used:
                continue
            compatible = (
                old.kind is state.kind
                or StateKind.CRITICAL in (old.kind, state.kind)
            )
            gap = abs(old.e - state.e)
            if compatible and gap < best_gap:
                best, best_gap = old_id, gap
        if best is None:
            best = next_id
            next_id += 1
        used.add(best)
        ids.append(best)
    return ids, next_id


def _states_at(args):
    params, scan, seeds = args
    return find_bound_states(params, scan, seeds)


def sweep_v0(
    a: float,
    x0: float,
    v0_min: float,
    v0_max: float,
    steps: int,
    scan: ScanConfig = ScanConfig(),
    warm_start: bool = True,
    refine_coalescence: bool = True,
    workers: int = 1,
) -> SpectrumCurve:
    """Bound states on a uniform grid of depths.

    With ``warm_start`` the roots at each depth seed the search at the next
    one (sequential); otherwise every depth is scanned independently and
    ``workers > 1`` spreads them over processes.  With
    ``refine_coalescence``, whenever the antiparticle state disappears
    between two grid depths the critical potential in between is located and
    extra depths approaching it from below are inserted, so the merging of
    the two branches is resolved down to ``1e-10`` below it.
    """
    if not 0 < v0_min < v0_max:
        raise InvalidParameter(f"need 0 < v0_min < v0_max, got {v0_min}, {v0_max}")
    if steps < 2:
        raise InvalidParameter(f"steps must be >= 2, got {steps}")
    depths = [float(v) for v in np.linspace(v0_min, v0_max, steps)]
    results = _scan_depths(a, x0, depths, scan, warm_start, workers)

    if refine_coalescence:
        extra = []
        for (v_a, s_a), (v_b, s_b) in zip(results[:-1], results[1:]):
            had_pair = any(s.kind is StateKind.ANTIPARTICLE for s in s_a)
            has_pair = any(s.kind is StateKind.ANTIPARTICLE for s in s_b)
            if had_pair and not has_pair:
                try:
                    v_cr, _ = critical_potential(a, x0, v_a, v_b, scan)
                except BracketInvalid:
                    continue
                # |N| ~ sqrt(v_cr - v0): decades in depth keep neighbouring norms within ~3x
                gap = (v_cr - v_a) / 10
                while gap >= 1e-10:
                    extra.append(v_cr - gap)
                    gap /= 10
        if extra:
            extra_results = _scan_depths(a, x0, sorted(extra), scan, False, workers)
            results = sorted(results + extra_results, key=lambda item: item[0])

    points = []
    previous = None
    next_id = 0
    for v0, states in results:
        point = SpectrumPoint(v0=v0, states=states)
        point.branch_ids, next_id = _assign_branches(previous, states, next_id)
        points.append(point)
        previous = point
    return SpectrumCurve(a=a, x0=x0, points=points)


def _scan_depths(a, x0, depths, scan, warm_start, workers):
    if warm_start:
        results = []
        seeds: list[float] = []
        for v0 in depths:
            states = find_bound_states(PotentialParams(v0, a, x0), scan, seeds)
            seeds = [s.e for s in states]
            results.append((v0, states))
        return results
    jobs = [(PotentialParams(v0, a, x0), scan, ()) for v0 in depths]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(_states_at, jobs))
    else:
        found = [_states_at(job) for job in jobs]
    return list(zip(depths, found))


# ---------------------------------------------------------------------------
# critical potential


class CriticalPoint(NamedTuple):
    x0: float
    v_cr: float
    e_cr: float
    v_onset: float


def _local_roots(params: PotentialParams, center: float, half_width: float, points: int = 200):
    lo = max(center - half_width, -1 + 1e-12)
    hi = min(center + half_width, 1 - 1e-12)
    local = ScanConfig(e_min=lo, e_max=hi, grid_points=points, refine_tol=1e-13)
    return find_roots(params, local)


def _pair_split(params, center, half_width):
    """The two deep roots near ``center`` or ``None`` when fewer than two exist."""
    roots = _local_roots(params, center, half_width)
    if len(roots) < 2:
        return None
    # keep the adjacent pair closest to the expected centre
    pairs = sorted(zip(roots[:-1], roots[1:]), key=lambda r: abs(0.5 * (r[0] + r[1]) - center))
    return pairs[0]


def _refine_coalescence(a, x0, lo, hi, pair, max_iter=80):
    """Secant iteration on the squared root splitting, which vanishes linearly at ``v_cr``."""
    history = [(lo, (pair[1] - pair[0]) ** 2)]
    center = 0.5 * (pair[0] + pair[1])
    width = pair[1] - pair[0]
    trial = lo + 0.5 * (hi - lo)
    estimate = hi
    for _ in range(max_iter):
        found = _pair_split(PotentialParams(trial, a, x0), center, 2 * width + 1e-7)
        if found is None:
            hi = trial
        else:
            lo, pair = trial, found
            center = 0.5 * (pair[0] + pair[1])
            width = pair[1] - pair[0]
            history.append((trial, width ** 2))
        if hi - lo < 1e-12:
            estimate = hi
            break
        if len(history) < 2:
            # no secant line yet
            estimate = hi
            trial = lo + 0.5 * (hi - lo)
            continue
        (v1, s1), (v2, s2) = history[-2], history[-1]
        estimate = v2 + s2 * (v2 - v1) / (s1 - s2) if s1 != s2 else hi
        if abs(estimate - lo) < 1e-12:
            break
        # stay strictly below the estimate so the pair still exists at the next trial
        trial = estimate - 0.01 * (estimate - lo)
        if not lo < trial < hi:
            trial = lo + 0.5 * (hi - lo)
    v_cr = min(max(estimate, lo), hi)
    return v_cr, center, pair


def critical_potential(
    a: float,
    x0: float,
    v0_lo: float | None = None,
    v0_hi: float | None = None,
    scan: ScanConfig = ScanConfig(),
    v0_tol: float = 1e-4,
) -> tuple[float, float]:
    """Depth ``v_cr`` at which the particle ground state and the antiparticle state merge.

    Bisection on "a nodeless bound state exists" narrows ``[v0_lo, v0_hi]``
    to ``v0_tol``; when the pair is resolved at the lower end, a secant
    iteration on the squared splitting of the two roots then pins the merge
    point to ~1e-12.  Without a bracket one is searched upward from
    ``v0 = 1``.

    Returns
    -------
    (v_cr, e_cr)

    Raises
    ------
    BracketInvalid
        If the predicate has the same value at both ends of the bracket.
    """
    if v0_lo is None or v0_hi is None:
        v0_lo, v0_hi = _auto_bracket(a, x0, scan)

    def deep(v0):
        return deep_branch(PotentialParams(v0, a, x0), scan)

    deep_lo = deep(v0_lo)
    if not deep_lo or deep(v0_hi):
        raise BracketInvalid(
            f"nodeless states must exist at v0={v0_lo} and be gone at v0={v0_hi}"
        )
    lo, hi = v0_lo, v0_hi
    while hi - lo > v0_tol:
        mid = 0.5 * (lo + hi)
        found = deep(mid)
        if found:
            lo, deep_lo = mid, found
        else:
            hi = mid
    if len(deep_lo) < 2:
        return 0.5 * (lo + hi), deep_lo[0]
    v_cr, e_cr, _ = _refine_coalescence(a, x0, lo, hi, (deep_lo[0], deep_lo[1]))
    return v_cr, e_cr


def _auto_bracket(a, x0, scan, start=1.0, factor=1.25, v0_cap=None):
    v0_cap = v0_cap if v0_cap is not None else 25.0 / a
    lo = start
    if not deep_branch(PotentialParams(lo, a, x0), scan):
        raise BracketInvalid(f"no nodeless state at v0={lo}")
    hi = lo * factor
    while deep_branch(PotentialParams(hi, a, x0), scan):
        lo, hi = hi, hi * factor
        if hi > v0_cap:
            raise BracketInvalid(f"no critical potential below v0={v0_cap}")
    return lo, hi


def antiparticle_onset(
    a: float,
    x0: float,
    v0_lo: float,
    v_cr: float,
    scan: ScanConfig = ScanConfig(),
    v0_tol: float = 1e-4,
) -> float:
    """Smallest depth at which both deep states exist in the scan window.

    The antiparticle state enters from ``E = -1``; ``scan.e_min`` sets how
    close to the continuum it has to be before it is counted.
    """

    def pair_exists(v0):
        return len(deep_branch(PotentialParams(v0, a, x0), scan)) >= 2

    lo, hi = v0_lo, v_cr - 1e-9
    if pair_exists(lo):
        raise BracketInvalid(f"the pair already exists at v0={lo}")
    if not pair_exists(hi):
        raise BracketInvalid(f"no pair just below v_cr={v_cr}")
    while hi - lo > v0_tol:
        mid = 0.5 * (lo + hi)
        if pair_exists(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _critical_for(args):
    a, x0, scan = args
    v0_lo, v0_hi = _auto_bracket(a, x0, scan)
    v_cr, e_cr = critical_potential(a, x0, v0_lo, v0_hi, scan)
    try:
        onset = antiparticle_onset(a, x0, v0_lo, v_cr, scan)
    except BracketInvalid:
        onset = math.nan
    return CriticalPoint(x0=x0, v_cr=v_cr, e_cr=e_cr, v_onset=onset)


def sweep_x0(a: float, x0_values: Sequence[float], scan: ScanConfig = ScanConfig(), workers: int = 1) -> list[CriticalPoint]:
    """Critical point (and antiparticle onset depth) for each well width."""
    for x0 in x0_values:
        if x0 > 0:
            raise InvalidParameter(f"x0 must be <= 0, got {x0}")
    jobs = [(a, float(x0), scan) for x0 in x0_values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_critical_for, jobs))
    return [_critical_for(job) for job in jobs]
