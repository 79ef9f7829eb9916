"""Sideband weights of a sinusoidal and a CRAB modulation.

The sinusoidal comb follows squared Bessel functions; a windowed CRAB pulse
spreads weight over a few more harmonics and shifts the carrier.
"""
import numpy as np
from scipy.special import jv

from floquet_tur.modulation import ModulationSpec, carrier_frequency, floquet_spectrum

omega0, Delta = 30.0, 2.0

for lam in (0.02, 0.5):
    sp = floquet_spectrum(ModulationSpec.sinusoidal(omega0, lam, Delta))
    print(f"sinusoidal lambda={lam}: {len(sp)} sidebands, sum P = {sp.total_weight:.12f}")
    for q, P in zip(sp.q, sp.P):
        if abs(q) <= 2:
            print(f"  q={q:+d}  P={P:.6e}  J_q(lam)^2={jv(q, lam) ** 2:.6e}")

rng = np.random.default_rng(1)
spec = ModulationSpec.crab(omega0, Delta, 1.0, rng.uniform(-1, 1, 20))
sp = floquet_spectrum(spec)
print(f"\nCRAB N=10 mu=1: carrier {carrier_frequency(spec):.6f}, {len(sp)} sidebands")
top = np.argsort(sp.P)[::-1][:5]
for k in sorted(top, key=lambda i: sp.q[i]):
    print(f"  q={sp.q[k]:+d}  omega_q={sp.omega_q[k]:.4f}  P={sp.P[k]:.4e}")
