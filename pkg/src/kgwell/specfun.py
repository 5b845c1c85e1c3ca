"""Kummer and Whittaker M functions for complex parameters and argument.

Everything here is evaluated from the Taylor series of the confluent
hypergeometric function

    M(a, b, z) = sum_n (a)_n z^n / ((b)_n n!)

in double precision.  The series is only trusted for ``|z| <= 50``; larger
arguments raise :class:`~kgwell.errors.NonConvergence` instead of returning a
value with an unknown number of correct digits.  The arguments met in the
bound-state problem have ``|z| = 2 a V0``, far inside that range.

For ``Re z < 0`` the terms alternate in sign and cancel, so the value is
taken from Kummer's transformation ``M(a, b, z) = e^z M(b - a, b, -z)``,
whose series has no such cancellation.

The partial sums are accumulated term by term, and the returned value is the
correctly rounded sum of all terms (``math.fsum`` on the real and imaginary
parts separately), which recovers the digits naive summation loses when the
terms rotate in phase along the imaginary axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InvalidParameter, NonConvergence

__all__ = [
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "MAX_SERIES_ARGUMENT",
    "kummer_m",
    "kummer_m_derivative",
    "whittaker_m",
    "whittaker_m_derivative",
]

MAX_SERIES_ARGUMENT = 50.0


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for the Kummer series.

    Parameters
    ----------
    rel_tol : float
        Summation stops once a term is smaller than ``rel_tol`` times the
        running partial sum (checked on two consecutive terms).
    max_terms : int
        Upper bound on the number of terms before giving up.
    """

    rel_tol: float = 1e-15
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise InvalidParameter(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise InvalidParameter(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_POLICY = SeriesPolicy()


def _is_nonpositive_integer(b: complex) -> bool:
    return b.imag == 0 and b.real <= 0 and b.real == math.floor(b.real)


def _check_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonConvergence(f"{what} produced a non-finite value {value!r}")
    return value


def kummer_m(a, b, z, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Kummer's confluent hypergeometric function M(a, b, z).

    Parameters
    ----------
    a, b, z : complex
        Function parameters and argument.  ``b`` must not be zero or a
        negative integer.
    policy : SeriesPolicy
        Series truncation settings.

    Returns
    -------
    complex

    Raises
    ------
    InvalidParameter
        If ``b`` is a non-positive integer.
    NonConvergence
        If ``|z|`` exceeds the series range or the term budget runs out.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise InvalidParameter(f"b = {b} is a pole of M(a, b, z)")
    if not abs(z) <= MAX_SERIES_ARGUMENT:
        raise NonConvergence(
            f"|z| = {abs(z):.6g} is outside the series range |z| <= {MAX_SERIES_ARGUMENT}"
        )

    if z.real < 0:
        return _check_finite(cmath.exp(z) * _series(b - a, b, -z, policy), "kummer_m")
    return _check_finite(_series(a, b, z, policy), "kummer_m")


def _series(a: complex, b: complex, z: complex, policy: SeriesPolicy) -> complex:
    term = 1.0 + 0.0j
    partial = term
    re_parts = [1.0]
    im_parts = [0.0]
    small_in_a_row = 0
    tol = policy.rel_tol
    for n in range(policy.max_terms):
        term = term * (a + n) * z / ((b + n) * (n + 1))
        partial += term
        re_parts.append(term.real)
        im_parts.append(term.imag)
        # past the hump the term ratio is below one; only then is a small term final
        if abs(term) <= tol * abs(partial) and abs((a + n + 1) * z) < abs((b + n + 1) * (n + 2)):
            small_in_a_row += 1
            if small_in_a_row == 2:
                return complex(math.fsum(re_parts), math.fsum(im_parts))
        else:
            small_in_a_row = 0
    raise NonConvergence(
        f"Kummer series for a={a}, b={b}, z={z} did not converge in {policy.max_terms} terms"
    )


def kummer_m_derivative(a, b, z, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """dM/dz, using dM(a, b, z)/dz = (a/b) M(a+1, b+1, z)."""
    a, b = complex(a), complex(b)
    if _is_nonpositive_integer(b):
        raise InvalidParameter(f"b = {b} is a pole of M(a, b, z)")
    if a == 0:
        return 0j
    return a / b * kummer_m(a + 1, b + 1, z, policy)


def _whittaker_parts(kappa, mu, z):
    kappa, mu, z = complex(kappa), complex(mu), complex(z)
    b = 1 + 2 * mu
    if _is_nonpositive_integer(b):
        raise InvalidParameter(f"1 + 2*mu = {b} is zero or a negative integer")
    if z == 0:
        raise InvalidParameter("whittaker_m is evaluated at z != 0 only")
    return mu - kappa + 0.5, b, z


def whittaker_m(kappa, mu, z, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Whittaker function M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z).

    The power ``z**(mu + 1/2)`` is taken on the principal branch.
    """
    a, b, z = _whittaker_parts(kappa, mu, z)
    mu = complex(mu)
    prefactor = cmath.exp(-z / 2 + (mu + 0.5) * cmath.log(z))
    return _check_finite(prefactor * kummer_m(a, b, z, policy), "whittaker_m")


def whittaker_m_derivative(kappa, mu, z, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Derivative of :func:`whittaker_m` with respect to ``z`` (product rule)."""
    a, b, z = _whittaker_parts(kappa, mu, z)
    mu = complex(mu)
    prefactor = cmath.exp(-z / 2 + (mu + 0.5) * cmath.log(z))
    m = kummer_m(a, b, z, policy)
    dm = kummer_m_derivative(a, b, z, policy)
    value = prefactor * ((-0.5 + (mu + 0.5) / z) * m + dm)
    return _check_finite(value, "whittaker_m_derivative")
