"""
Square-well and cusp-well limits
================================

Shrinking a turns the well into a square well; the eigenvalues approach the
square-well ones linearly in a. At x0 = 0 the well is a symmetric cusp and
every state is even or odd.
"""

import math

from kgwell import PotentialParams
from kgwell.matching import match_coefficients, wavefunction_eval
from kgwell.oracle import square_well_eigenvalues
from kgwell.spectrum import find_roots

v0, width = 2.0, 0.5
square = square_well_eigenvalues(v0, width)
print(f"square well V0 = {v0}, width = {width}: {[round(e, 10) for e in square]}")
for a in (1e-2, 1e-3, 1e-4, 1e-5):
    smooth = find_roots(PotentialParams(v0, a, -width))
    dev = max(abs(s - r) for s, r in zip(smooth, square))
    print(f"  a = {a:7.0e}: max deviation {dev:.2e}")

cusp = PotentialParams(2.9, 0.5, 0.0)
print(f"\ncusp well V0 = {cusp.v0}, a = {cusp.a}")
for e in find_roots(cusp):
    state = match_coefficients(e, cusp)
    left, right = wavefunction_eval(state, -0.7), wavefunction_eval(state, 0.7)
    parity = "even" if abs(left - right) < abs(left + right) else "odd"
    print(f"  E = {e:.12f}  {parity}  |phi(-0.7)| - |phi(0.7)| = {abs(left) - abs(right):.1e}")
