"""
Particle and antiparticle states merging
========================================

Follow the two deep states as the well deepens. Their energies approach each
other and both norms shrink to zero at the critical depth.
"""

import numpy as np

from kgwell import PotentialParams
from kgwell.matching import match_coefficients
from kgwell.spectrum import antiparticle_onset, critical_potential, deep_branch, kg_norm

a, x0 = 0.5, -0.5

v_cr, e_cr = critical_potential(a, x0, 2.6, 2.8)
onset = antiparticle_onset(a, x0, 2.6, v_cr)
print(f"antiparticle state appears at V0 = {onset:.5f}")
print(f"states merge at V0 = {v_cr:.10f}, E = {e_cr:.8f}")

# approach the merge in decades: |N| falls like sqrt(v_cr - V0)
print(f"\n{'v_cr - V0':>10} {'E_anti':>14} {'E_part':>14} {'N_anti':>11} {'N_part':>11}")
for gap in np.logspace(-2, -10, 5):
    well = PotentialParams(v_cr - gap, a, x0)
    pair = deep_branch(well)
    if len(pair) != 2:
        continue
    norms = [kg_norm(match_coefficients(e, well)) for e in pair]
    print(f"{gap:10.0e} {pair[0]:14.10f} {pair[1]:14.10f} {norms[0]:11.2e} {norms[1]:11.2e}")

# past the merge no nodeless state is left
print(f"\nnodeless states at V0 = {v_cr + 1e-3:.4f}: {len(deep_branch(PotentialParams(v_cr + 1e-3, a, x0)))}")
