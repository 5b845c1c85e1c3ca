"""
Critical depth against the width of the flat bottom
===================================================

Locate the critical depth for a range of x0 and write the data as CSV. A
wider flat bottom binds more strongly, so less depth is needed.
"""

import csv
import sys

import numpy as np

from kgwell.spectrum import sweep_x0

a = 0.5
points = sweep_x0(a, np.linspace(0.0, -1.0, 5))

writer = csv.writer(sys.stdout, lineterminator="\n")
writer.writerow(["x0", "v_cr", "e_cr", "v_onset"])
for p in points:
    writer.writerow([f"{p.x0:.12g}", f"{p.v_cr:.12g}", f"{p.e_cr:.12g}", f"{p.v_onset:.12g}"])
