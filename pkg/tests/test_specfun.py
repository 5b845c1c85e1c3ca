import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgwell.errors import InvalidParameter, NonConvergence
from kgwell.specfun import (
    SeriesPolicy,
    kummer_m,
    kummer_m_derivative,
    whittaker_m,
    whittaker_m_derivative,
)

# 50-digit brute-force series values (mpmath), frozen
KUMMER_REF = 0.84163824555651852103 + 0.71449554328766117726j
KUMMER_DERIV_REF = 0.17227327347273573629 + 0.21769556500295528011j
WHITTAKER_REF = 1.945234405550007245 + 2.6729570961349756829j
WHITTAKER_DERIV_REF = 0.75362966136077827592 - 0.54845113243372434121j

A_REF, B_REF, Z_REF = 0.5 - 0.25j, 2.0, 2.73j
KAPPA_REF = 0.49j  # -i a E with a = 0.5, E = -0.98
MU_REF = 0.5 * math.sqrt(1 - 0.98 ** 2)


def random_points(n=200, seed=20240611, z_max=10.0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        a = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        b = complex(rng.uniform(0.5, 4), rng.uniform(-2, 2))
        z = rng.uniform(0, z_max) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        yield a, b, z


def close(x, y, tol):
    return abs(x - y) <= tol * max(1.0, abs(y))


class TestKummerValues:
    def test_zero_argument(self):
        assert kummer_m(0.3, 1.2, 0) == 1

    def test_closed_form(self):
        assert kummer_m(1, 2, 1) == pytest.approx(math.e - 1, rel=1e-15)
        assert kummer_m(1, 2, -1) == pytest.approx(1 - math.exp(-1), rel=1e-15)

    def test_high_precision_reference(self):
        assert close(kummer_m(A_REF, B_REF, Z_REF), KUMMER_REF, 1e-14)

    def test_matches_mpmath_on_random_points(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        for a, b, z in random_points(60, seed=3):
            want = complex(mp.hyp1f1(a, b, z))
            assert abs(kummer_m(a, b, z) - want) <= 1e-12 * (1 + abs(want))

    def test_polynomial_case(self):
        # a = -2 truncates the series: M(-2, b, z) = 1 - 2z/b + z^2/(b(b+1))
        b, z = 1.5, 0.7 + 0.2j
        assert close(kummer_m(-2, b, z), 1 - 2 * z / b + z * z / (b * (b + 1)), 1e-14)


class TestKummerDerivative:
    def test_origin(self):
        assert kummer_m_derivative(1, 2, 0) == pytest.approx(0.5)

    def test_closed_form(self):
        # d/dz (e^z - 1)/z at z = 1 is e - (e - 1) = 1
        assert kummer_m_derivative(1, 2, 1) == pytest.approx(1.0, rel=1e-14)

    def test_reference(self):
        assert close(kummer_m_derivative(A_REF, B_REF, Z_REF), KUMMER_DERIV_REF, 1e-14)

    def test_finite_difference(self):
        h = 1e-6
        fd = (kummer_m(A_REF, B_REF, Z_REF + h) - kummer_m(A_REF, B_REF, Z_REF - h)) / (2 * h)
        assert abs(kummer_m_derivative(A_REF, B_REF, Z_REF) - fd) < 1e-8

    def test_a_zero(self):
        assert kummer_m_derivative(0, 2.5, 3j) == 0


class TestKummerIdentities:
    def test_kummer_transformation(self):
        for a, b, z in random_points():
            lhs = kummer_m(a, b, z)
            rhs = cmath.exp(z) * kummer_m(b - a, b, -z)
            assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs)), (a, b, z)

    def test_ode_residual(self):
        h = 1e-5
        for a, b, z in random_points(50, seed=11, z_max=5.0):
            m = kummer_m(a, b, z)
            dm = kummer_m_derivative(a, b, z)
            d2m = (kummer_m_derivative(a, b, z + h) - kummer_m_derivative(a, b, z - h)) / (2 * h)
            residual = z * d2m + (b - z) * dm - a * m
            scale = 1 + abs(z * d2m) + abs((b - z) * dm) + abs(a * m)
            assert abs(residual) <= 1e-8 * scale, (a, b, z)

    @settings(max_examples=100, deadline=None)
    @given(
        st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
        st.floats(0.3, 4),
        st.floats(-2, 2),
        st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False),
    )
    def test_conjugation_symmetry(self, a, b_re, b_im, z):
        b = complex(b_re, b_im)
        value = kummer_m(a, b, z)
        mirrored = kummer_m(a.conjugate(), b.conjugate(), z.conjugate())
        assert abs(mirrored - value.conjugate()) <= 1e-13 * (1 + abs(value))


class TestKummerErrors:
    @pytest.mark.parametrize("b", [0, -1, -4.0])
    def test_pole_in_b(self, b):
        with pytest.raises(InvalidParameter):
            kummer_m(0.5, b, 1.0)

    def test_argument_cap(self):
        with pytest.raises(NonConvergence):
            kummer_m(0.5, 1.5, 60j)

    def test_term_budget(self):
        with pytest.raises(NonConvergence):
            kummer_m(0.5, 1.5, 20j, SeriesPolicy(max_terms=5))

    def test_policy_validation(self):
        with pytest.raises(InvalidParameter):
            SeriesPolicy(rel_tol=0)
        with pytest.raises(InvalidParameter):
            SeriesPolicy(max_terms=0)


class TestWhittaker:
    def test_sinh_identity(self):
        assert whittaker_m(0, 0.5, 2) == pytest.approx(2 * math.sinh(1), rel=1e-14)
        rng = np.random.default_rng(5)
        for _ in range(200):
            z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
            assert abs(whittaker_m(0, 0.5, z) - 2 * cmath.sinh(z / 2)) <= 1e-10 * (1 + abs(cmath.sinh(z / 2)))

    def test_sinh_identity_derivative(self):
        assert whittaker_m_derivative(0, 0.5, 2) == pytest.approx(math.cosh(1), rel=1e-14)

    def test_reference_values(self):
        assert close(whittaker_m(KAPPA_REF, MU_REF, Z_REF), WHITTAKER_REF, 1e-14)
        assert close(whittaker_m_derivative(KAPPA_REF, MU_REF, Z_REF), WHITTAKER_DERIV_REF, 1e-13)

    def test_derivative_finite_difference(self):
        h = 1e-6
        rng = np.random.default_rng(9)
        for _ in range(30):
            kappa = complex(0, rng.uniform(-0.5, 0.5))
            mu = rng.uniform(0.01, 0.5)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 4))
            fd = (whittaker_m(kappa, mu, z + h) - whittaker_m(kappa, mu, z - h)) / (2 * h)
            assert abs(whittaker_m_derivative(kappa, mu, z) - fd) <= 1e-8 * max(1, abs(fd))

    def test_ode_residual_on_imaginary_axis(self):
        h = 1e-5
        rng = np.random.default_rng(13)
        for _ in range(50):
            kappa = complex(0, rng.uniform(-0.5, 0.5))
            mu = rng.uniform(0.01, 0.5)
            z = complex(0, rng.uniform(0.2, 5))
            w = whittaker_m(kappa, mu, z)
            d2w = (whittaker_m_derivative(kappa, mu, z + h) - whittaker_m_derivative(kappa, mu, z - h)) / (2 * h)
            residual = d2w + (-0.25 + kappa / z + (0.25 - mu * mu) / (z * z)) * w
            assert abs(residual) <= 1e-8 * max(1, abs(w) / abs(z) ** 2), (kappa, mu, z)

    def test_regularity_limit(self):
        # z^(-1/2) M_{kappa,mu}(z) ~ z^mu -> 0 when Re(mu) > 0
        mu = MU_REF
        values = [abs(whittaker_m(KAPPA_REF, mu, 1j * 10.0 ** -k) / cmath.sqrt(1j * 10.0 ** -k)) for k in range(1, 9)]
        assert all(b < a for a, b in zip(values, values[1:]))
        for k, v in zip(range(1, 9), values):
            assert v == pytest.approx(10.0 ** (-k * mu), rel=0.06)

    def test_leading_term(self):
        for k in range(1, 9):
            z = 1j * 10.0 ** -k
            ratio = whittaker_m(KAPPA_REF, MU_REF, z) / z ** (MU_REF + 0.5)
            assert abs(ratio - 1) < 2 * abs(z)

    def test_invalid(self):
        with pytest.raises(InvalidParameter):
            whittaker_m(0.1, -0.5, 1j)
        with pytest.raises(InvalidParameter):
            whittaker_m(0.1, 0.2, 0)
