"""
Bound states of the reference well
==================================

Solve the well V0 = 2.73, a = 0.5, x0 = -0.5, attach Klein-Gordon norms and
cross-check every eigenvalue against direct shooting.
"""

from kgwell import PotentialParams, find_bound_states
from kgwell.matching import match_coefficients
from kgwell.oracle import shooting_eigenvalues
from kgwell.spectrum import count_nodes

well = PotentialParams(v0=2.73, a=0.5, x0=-0.5)

# analytic matching: roots of the determinant, then norms
states = find_bound_states(well)

# independent check: integrate from both tails and match at x = 0
shot = shooting_eigenvalues(well)

print(f"{'E':>18} {'N':>10} {'kind':>13} {'nodes':>5} {'|E - E_shoot|':>14}")
for state, e_shoot in zip(states, shot):
    nodes = count_nodes(match_coefficients(state.e, well))
    print(f"{state.e:18.13f} {state.norm:10.4f} {state.kind.value:>13} {nodes:5d} {abs(state.e - e_shoot):14.1e}")

# the two nodeless states sit close to E = -1: a particle (N > 0) and its
# antiparticle partner (N < 0)
