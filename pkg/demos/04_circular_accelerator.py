"""The circularly driven qubit only ever runs as a heat accelerator.

Its hot and cold noise-to-signal ratios differ slightly, unlike the
sinusoidal machine where they coincide.
"""
import numpy as np

from floquet_tur.bath import MachineParams
from floquet_tur.circular import circular_cumulants, floquet_diagonalize
from floquet_tur.metrics import classify_regime, tur_ratios

params = MachineParams(25.0, 0.01, 0.06)
hot, cold = params.plain_baths()

print(f"{'Omega':>6} {'Omega_R':>9} {'regime':>12} {'R_h':>9} {'R_c':>9} {'rel. asym':>10}")
for W in np.linspace(2.0, 23.0, 8):
    cf = floquet_diagonalize(25.0, W, 0.02)
    c = circular_cumulants(cf, hot, cold)
    R_h, R_c, _ = tur_ratios(c, params.scale)
    asym = abs(c.var_h / c.J_h**2 - c.var_c / c.J_c**2) / (c.var_h / c.J_h**2)
    print(f"{W:6.2f} {cf.Omega_R:9.5f} {classify_regime(c, params.scale):>12} "
          f"{R_h:9.5f} {R_c:9.5f} {asym:10.2e}")
