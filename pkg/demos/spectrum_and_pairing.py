"""Majorana spectrum of a chain with a quadratic field profile.

Run: python demos/spectrum_and_pairing.py
"""

import numpy as np

from quadising import ChainParams, build_profile, check_chiral_pairing, spectrum

params = ChainParams(N=80, g=5e-4, delta=0.3)
prof = build_profile(params)
s = spectrum(prof)

print(f"chain of {params.L} spins, field from {prof.values.min():.3f} (center) to {prof.values.max():.3f} (ends)")
print(f"ground energy E_g = {s.ground_energy:.10f}")

# every eigenvalue comes with its negative; the chiral operator maps one eigenvector to the other
rep = check_chiral_pairing(s)
print(f"chiral pairing ok: {rep.ok} (max residual {rep.max_pairing_residual:.1e})")

pair = s.near_zero_pair()
print("two eigenvalues closest to zero:", s.lambdas[pair])
print("numerically degenerate:", s.numerically_degenerate)
print("lowest five quasiparticle energies:", np.round(s.epsilons[:5], 6))
