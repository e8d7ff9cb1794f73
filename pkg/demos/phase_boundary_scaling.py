"""Real-space magnetization and susceptibility at fixed g N^2.

Holding g_N = g N^2 fixed, the local field at scaled position xi = j/N is
g_N xi^2 + delta, so the local-uniform picture puts the phase boundary at
xi_c = sqrt((J - delta)/g_N). Magnetization curves for growing N cross near
xi_c and the susceptibility peak sharpens toward it.

Run: python demos/phase_boundary_scaling.py   (about 15 s)
"""

import numpy as np

from quadising.sweeps import scaling_sweep

gN, delta = 3.0, 0.3
sw = scaling_sweep([30, 60, 120], gN, delta)
xc = np.sqrt((1 - delta) / gN)

print(f"local-uniform boundary xi_c = {xc:.4f}")
for c in sw.crossings.plus:
    print(f"  N = {c.N1} and {c.N2} cross at xi = {c.xi:.4f}")
for s, (x, h) in zip(sw.series, sw.peaks):
    print(f"  N = {s.N}: |chi| peak {h:.3f} at xi = {x:.3f}")
