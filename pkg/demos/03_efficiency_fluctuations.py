"""Efficiency-fluctuation ratios against the Carnot-type bounds.

Random engines stay below eta_C^2; refrigerators stay below eta_R^2 while
their fluctuation ratio drops under the squared mean efficiency.
"""
import numpy as np

from floquet_tur.bath import MachineParams
from floquet_tur.fcs import cumulants_analytic
from floquet_tur.metrics import classify_regime, delta_critical, efficiency_fluctuation_ratios
from floquet_tur.modulation import sinusoidal_three_mode

rng = np.random.default_rng(0)
gaps = []
while len(gaps) < 2000:
    om = rng.uniform(1, 10)
    bh, bc = np.sort(rng.uniform(0.1, 10, 2))
    D = rng.uniform(0, 1) * delta_critical(om, bh, bc)
    p = MachineParams(om, bh, bc)
    c = cumulants_analytic(sinusoidal_three_mode(om, 0.02, D), *p.split_baths())
    if classify_regime(c, p.scale) == "engine":
        eff = efficiency_fluctuation_ratios(c, "engine", bh, bc)
        gaps.append(eff["eta_C_sq"] - eff["eta2"])
print(f"engines: {len(gaps)} draws, min(eta_C^2 - eta2) = {min(gaps):.3e}")

params = MachineParams(30.0, 0.005, 0.01)
hot, cold = params.split_baths()
print(f"\n{'Delta':>6} {'eta2':>10} {'<eta>^2':>10} {'eta_R^2':>8}")
for D in (10.5, 12.0, 15.0, 20.0, 28.0):
    c = cumulants_analytic(sinusoidal_three_mode(30.0, 0.02, D), hot, cold, precision=50)
    eff = efficiency_fluctuation_ratios(c, "refrigerator", 0.005, 0.01)
    print(f"{D:6.1f} {eff['eta2']:10.6f} {eff['eta_mean_sq']:10.6f} {eff['eta_R_sq']:8.3f}")
