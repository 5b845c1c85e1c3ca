import math

import numpy as np
import pytest
from scipy.optimize import brentq

from kgwell.errors import IntegrationFailure, InvalidParameter, OutOfWindow
from kgwell.oracle import (
    IntegratorConfig,
    cusp_limit_check,
    shooting_eigenvalues,
    shooting_mismatch,
    shooting_solutions,
    square_well_condition,
    square_well_eigenvalues,
)
from kgwell.potential import PotentialParams, potential_value
from kgwell.spectrum import ScanConfig, find_roots

WELL = PotentialParams(2.73, 0.5, -0.5)
PARTICLE_ROOT, ANTIPARTICLE_ROOT = -0.9790866731801107, -0.9964867075814118


def shooting_root(params, guess, cfg=IntegratorConfig(), radius=1e-6):
    return brentq(lambda e: shooting_mismatch(e, params, cfg), guess - radius, guess + radius, xtol=1e-14)


class TestMismatch:
    def test_vanishes_at_eigenvalues(self):
        for e in (PARTICLE_ROOT, ANTIPARTICLE_ROOT):
            assert abs(shooting_mismatch(e, WELL)) < 1e-7

    def test_quoted_energy(self):
        # six digits leave the energy 3e-7 from the root
        assert abs(shooting_mismatch(-0.979087, WELL)) < 1e-6

    def test_between_eigenvalues(self):
        assert abs(shooting_mismatch(-0.988, WELL)) > 1e-3

    def test_bounded(self):
        for e in np.linspace(-0.99, 0.99, 9):
            assert abs(shooting_mismatch(e, WELL)) <= 1

    def test_tolerance_halving(self):
        base = shooting_root(WELL, PARTICLE_ROOT)
        halved = shooting_root(WELL, PARTICLE_ROOT, IntegratorConfig(rel_tol=5e-11, abs_tol=5e-13))
        assert abs(base - halved) < 1e-9

    def test_longer_span(self):
        base = shooting_root(WELL, PARTICLE_ROOT)
        longer = shooting_root(WELL, PARTICLE_ROOT, IntegratorConfig(span_decay_lengths=60))
        fixed = shooting_root(WELL, PARTICLE_ROOT, IntegratorConfig(x_span=60 / math.sqrt(1 - PARTICLE_ROOT ** 2)))
        assert abs(base - longer) < 1e-9 and abs(longer - fixed) < 1e-10

    def test_agrees_with_matching_root(self):
        assert shooting_root(WELL, PARTICLE_ROOT) == pytest.approx(PARTICLE_ROOT, abs=1e-9)

    def test_dense_output_solves_the_equation(self):
        e = PARTICLE_ROOT
        h = 1e-5
        for sol in shooting_solutions(e, WELL, dense=True):
            for x in np.linspace(sol.t[0], sol.t[-1], 801)[1:-1]:
                if min(abs(x - WELL.x0), abs(x)) < 2 * h:
                    continue  # V' jumps at the interfaces
                y = sol.sol(x)
                d2 = (sol.sol(x + h)[1] - sol.sol(x - h)[1]) / (2 * h)
                k2 = (e - potential_value(WELL, x)) ** 2 - 1
                assert abs(d2 + k2 * y[0]) <= 1e-8 * np.hypot(*y) * (1 + abs(k2))

    def test_step_budget(self):
        with pytest.raises(IntegrationFailure):
            shooting_mismatch(PARTICLE_ROOT, WELL, IntegratorConfig(max_steps=10))

    def test_validation(self):
        with pytest.raises(OutOfWindow):
            shooting_mismatch(1.0, WELL)
        with pytest.raises(InvalidParameter):
            IntegratorConfig(rel_tol=0)
        with pytest.raises(InvalidParameter):
            IntegratorConfig(x_span=-1)


class TestCuspParity:
    def test_states_are_even_or_odd(self):
        p = PotentialParams(2.9, 0.5, 0.0)
        for e in find_roots(p):
            left, right = shooting_solutions(e, p)
            phi_l, dphi_l = left.y[:, -1] / np.hypot(*left.y[:, -1])
            phi_r, dphi_r = right.y[:, -1] / np.hypot(*right.y[:, -1])
            even = abs(dphi_l) < 1e-7 and abs(dphi_r) < 1e-7
            odd = abs(phi_l) < 1e-7 and abs(phi_r) < 1e-7
            assert even != odd


class TestSquareWell:
    def test_condition_values(self):
        e, v0, w = 0.2, 1.5, 0.5
        lam = math.sqrt(1 - e * e)
        q = math.sqrt((e + v0) ** 2 - 1)
        assert square_well_condition(e, v0, w) == pytest.approx(math.tan(q * w) * (q * q - lam * lam) - 2 * lam * q)

    def test_no_oscillatory_region_means_no_zero(self):
        es = np.linspace(-0.99, 0.5, 50)
        assert all(square_well_condition(e, 0.3, 1.0) < 0 for e in es if (e + 0.3) ** 2 < 1)

    def test_zeros_are_zeros(self):
        for v0, w in [(1.0, 2.0), (2.0, 0.5), (2.73, 1.0)]:
            for e in square_well_eigenvalues(v0, w):
                q = math.sqrt((e + v0) ** 2 - 1)
                lam = math.sqrt(1 - e * e)
                # cos-weighted form has no poles
                value = math.sin(q * w) * (q * q - lam * lam) - 2 * lam * q * math.cos(q * w)
                assert abs(value) < 1e-10

    def test_shallow_well_has_no_states_at_the_edge(self):
        assert square_well_eigenvalues(0.05, 0.1, ScanConfig(e_min=0.5, e_max=1 - 1e-3)) == []

    def test_validation(self):
        with pytest.raises(OutOfWindow):
            square_well_condition(1.0, 1.0, 1.0)
        with pytest.raises(InvalidParameter):
            square_well_condition(0.0, 1.0, 0.0)

    def test_reference_depth_has_no_states_either_way(self):
        assert square_well_eigenvalues(2.73, 0.5) == []
        assert find_roots(PotentialParams(2.73, 1e-3, -0.5)) == []

    @pytest.mark.parametrize("v0, width", [(1.0, 2.0), (2.0, 0.5)])
    def test_smooth_well_converges_linearly(self, v0, width):
        square = square_well_eigenvalues(v0, width)
        deviations = []
        for a in (1e-3, 1e-4):
            smooth = find_roots(PotentialParams(v0, a, -width))
            assert len(smooth) == len(square) > 0
            deviations.append(max(abs(s - r) for s, r in zip(smooth, square)))
        assert deviations[1] < 2e-4
        assert deviations[0] / deviations[1] == pytest.approx(10, rel=0.1)

    @pytest.mark.slow
    def test_shooting_approaches_square_well(self):
        p = PotentialParams(1.0, 1e-3, -2.0)
        shot = shooting_eigenvalues(p)
        square = square_well_eigenvalues(1.0, 2.0)
        assert len(shot) == len(square)
        assert max(abs(s - r) for s, r in zip(shot, square)) < 1e-3


class TestCrossOracle:
    @pytest.mark.slow
    def test_reference_well(self):
        shot = shooting_eigenvalues(WELL)
        analytic = find_roots(WELL)
        assert len(shot) == len(analytic) == 3
        assert shot[0] == pytest.approx(-0.996487, abs=1e-4)
        assert shot[1] == pytest.approx(-0.979087, abs=1e-4)
        assert max(abs(s - r) for s, r in zip(shot, analytic)) < 1e-6

    @pytest.mark.slow
    def test_cusp(self):
        p = PotentialParams(2.9, 0.5, 0.0)
        analytic = cusp_limit_check(2.9, 0.5)
        shot = shooting_eigenvalues(p)
        assert len(shot) == len(analytic) > 0
        assert max(abs(s - r) for s, r in zip(shot, analytic)) < 1e-6

    @pytest.mark.slow
    def test_shallow_cusp(self):
        analytic = cusp_limit_check(0.01, 0.5)
        shot = shooting_eigenvalues(PotentialParams(0.01, 0.5, 0.0))
        assert len(analytic) == len(shot)
        assert max((abs(s - r) for s, r in zip(shot, analytic)), default=0) < 1e-6

    @pytest.mark.slow
    def test_shallow_well(self):
        p = PotentialParams(0.2, 0.5, -0.5)
        shot = shooting_eigenvalues(p)
        analytic = find_roots(p)
        assert len(shot) == len(analytic) == 1
        assert abs(shot[0] - analytic[0]) < 1e-6

    def test_mismatch_vanishes_at_analytic_roots(self):
        p = PotentialParams(1.7, 0.3, -0.8)
        roots = find_roots(p)
        assert roots
        for e in roots:
            assert abs(shooting_mismatch(e, p)) < 1e-7
