"""Thermal quench: the fidelity oscillates with the zero-mode splitting.

A thermal state of H + kappa (d0 + d0^+) is released under H. Pairs of
many-body levels split by eps0 dephase and rephase, so the Uhlmann-Jozsa
fidelity between rho(0) and rho(t) oscillates with period 2 pi / eps0.

Run: python demos/quench_oscillations.py   (about 30 s)
"""

import numpy as np

from quadising import ChainParams, build_profile
from quadising.quench import evolve_and_fidelity, extract_period, pairing_spectrum, quench_setup

for g in (0.1, 0.2, 0.3):
    prof = build_profile(ChainParams(N=4, g=g, delta=0.5))
    setup = quench_setup(prof, steps=120)
    res = evolve_and_fidelity(setup)
    est = extract_period(res.times, res.fidelity)
    print(
        f"g = {g}: eps0 = {res.epsilon0_ref:.5f}, period {est.period:.3f} "
        f"vs 2 pi/eps0 = {res.period_predicted:.3f}, min L = {res.fidelity.min():.3f}"
    )

print("\nEven/odd partners in the many-body spectrum (N = 4, g = 0.1):")
for pr in pairing_spectrum(build_profile(ChainParams(N=4, g=0.1, delta=0.5)), k=4):
    print(f"  E+ = {pr.E_plus:.6f}  E- = {pr.E_minus:.6f}  |E+ - E-| = {pr.gap:.6f}  weight {pr.overlap:.4f}")
