import math

import numpy as np
import pytest

from kgwell.errors import InvalidParameter, OutOfWindow
from kgwell.potential import PotentialParams, Region, energy_quantities, potential_value, region_of


def test_flat_bottom():
    assert potential_value(PotentialParams(2, 0.5, -1), -0.5) == -2


def test_right_tail():
    assert potential_value(PotentialParams(2, 0.5, -1), 0.5) == pytest.approx(-0.735758882, abs=1e-9)


def test_cusp_is_even():
    p = PotentialParams(2, 0.5, 0)
    assert potential_value(p, -0.3) == pytest.approx(-2 * math.exp(-0.6), rel=1e-15)
    assert potential_value(p, -0.3) == potential_value(p, 0.3)


@pytest.mark.parametrize(
    "x0, x, region",
    [(-1, -2, Region.I), (-1, -1, Region.II), (-1, 0, Region.II), (-1, 1e-12, Region.III), (0, 0, Region.II)],
)
def test_regions(x0, x, region):
    assert region_of(PotentialParams(1, 0.5, x0), x) is region


@pytest.mark.parametrize("v0, a, x0", [(0, 0.5, -1), (-1, 0.5, -1), (1, 0, -1), (1, 0.5, 0.1), (math.nan, 1, -1), (1, math.inf, -1)])
def test_invalid_params(v0, a, x0):
    with pytest.raises(InvalidParameter):
        PotentialParams(v0, a, x0)


def test_mirror_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p = PotentialParams(rng.uniform(0.1, 4), rng.uniform(0.01, 2), -rng.uniform(0, 3))
        for x in rng.uniform(-10, 10, 50):
            assert potential_value(p, p.x0 - x) == pytest.approx(potential_value(p, x), rel=1e-12, abs=1e-300)


def test_bounds_and_decay():
    p = PotentialParams(2.73, 0.5, -0.5)
    xs = np.linspace(-30, 30, 2001)
    values = np.array([potential_value(p, x) for x in xs])
    assert np.all(values >= -p.v0) and np.all(values < 0)
    assert abs(potential_value(p, 60.0)) < 1e-50
    assert abs(potential_value(p, -60.0)) < 1e-50


@pytest.mark.parametrize("eps", [1e-8, 1e-9, 1e-10])
def test_continuity_at_edges(eps):
    p = PotentialParams(2.73, 0.5, -0.5)
    for edge in (p.x0, 0.0):
        for x in (edge - eps, edge + eps):
            assert abs(potential_value(p, x) + p.v0) <= p.v0 * eps / p.a * (1 + 1e-6)


def test_square_well_limit():
    p = PotentialParams(2.0, 1e-3, -1.0)
    layer = 10 * p.a
    for x in np.linspace(-3, 2, 5001):
        if abs(x - p.x0) < layer or abs(x) < layer:
            continue
        square = -p.v0 if p.x0 <= x <= 0 else 0.0
        assert abs(potential_value(p, x) - square) <= 0.01 * p.v0


def test_energy_quantities_reference_state():
    eq = energy_quantities(PotentialParams(2.73, 0.5, -0.5), -0.979087)
    assert eq.mu == pytest.approx(0.5 * math.sqrt(1 - 0.979087 ** 2), rel=1e-15)
    assert eq.q.real == pytest.approx(math.sqrt(1.750913 ** 2 - 1), rel=1e-15) and eq.q.imag == 0
    # commonly quoted rounded values
    assert eq.mu == pytest.approx(0.101698, abs=1e-4)
    assert eq.q.real == pytest.approx(1.437243, abs=1e-4)
    assert eq.kappa == pytest.approx(0.4895435j)
    assert eq.mu == pytest.approx(0.5 * eq.lam, rel=1e-15)


def test_energy_quantities_at_zero():
    eq = energy_quantities(PotentialParams(1.3, 0.7, -1), 0.0)
    assert eq.kappa == 0 and eq.mu == pytest.approx(0.7) and eq.lam == 1


def test_imaginary_q():
    eq = energy_quantities(PotentialParams(0.5, 0.5, -1), 0.4)
    assert eq.q.real == 0
    assert eq.q.imag == pytest.approx(0.435889894, abs=1e-9)


def test_q_squared_identity():
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = PotentialParams(rng.uniform(0.1, 4), rng.uniform(0.01, 2), -1)
        e = rng.uniform(-0.999, 0.999)
        eq = energy_quantities(p, e)
        assert abs(eq.q * eq.q - ((e + p.v0) ** 2 - 1)) <= 1e-14 * max(1, (e + p.v0) ** 2)
        assert eq.kappa.real == 0 and eq.mu >= 0


@pytest.mark.parametrize("e", [1.0, -1.0, 1.5])
def test_out_of_window(e):
    with pytest.raises(OutOfWindow):
        energy_quantities(PotentialParams(1, 1, -1), e)
