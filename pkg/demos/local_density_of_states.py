"""Local density of states by two independent routes.

The histogram route diagonalizes the Majorana matrix and distributes each
eigenvector's weight over the unit cells; the recursion route runs Lanczos from
a single site and closes the continued fraction with a square-root terminator.
Both show mid-gap weight only near the interfaces.

Run: python demos/local_density_of_states.py
"""

import numpy as np

from quadising import build_h_m, build_profile, params_from_scaled, spectrum
from quadising.ldos import l1_distance, ldos_histogram, ldos_recursion_grid

params = params_from_scaled(120, 3.0, 0.3)
prof = build_profile(params)
cells = [-120, -57, -30, 0, 30, 57, 120]

hist = ldos_histogram(spectrum(prof), bins=500, eta=0.02, cells=cells)
rec = ldos_recursion_grid(build_h_m(prof), depth=150, eta=0.02, bins=500, cells=cells)

mid_h = hist.window_weight(-0.05, 0.05)
mid_r = rec.window_weight(-0.05, 0.05)
print(" cell   states   mid-gap (hist)   mid-gap (recursion)   L1 distance")
for k, j in enumerate(cells):
    d = l1_distance(hist.values[k], rec.values[k], hist)
    print(f"{j:5d}   {hist.total_weight()[k]:.4f}   {mid_h[k]:.5f}          {mid_r[k]:.5f}               {100 * d:.2f}%")
