"""TUR ratio of the sinusoidally modulated qubit across the crossover.

Below Delta_cr the machine is an engine, above it a refrigerator.  R_h
touches 2 at the crossover, and the power noise exceeds the heat noise by
D = (omega0^2/Delta^2 - 1)/2.
"""
import numpy as np

from floquet_tur.bath import MachineParams
from floquet_tur.fcs import cumulants_analytic
from floquet_tur.metrics import delta_critical, machine_report
from floquet_tur.modulation import sinusoidal_three_mode

omega0, beta_h, beta_c, lam = 30.0, 0.005, 0.01, 0.02
params = MachineParams(omega0, beta_h, beta_c)
hot, cold = params.split_baths()
print(f"Delta_cr = {delta_critical(omega0, beta_h, beta_c)}")

print(f"{'Delta':>7} {'regime':>12} {'R_h':>12} {'R_P':>12} {'D':>10} {'D_analytic':>10}")
for D in np.r_[1.0, 5.0, 9.0, 9.9, 10.1, 11.0, 15.0, 25.0]:
    # 50 digits: near the crossover the ratios are differences of huge numbers
    c = cumulants_analytic(sinusoidal_three_mode(omega0, lam, D), hot, cold, precision=50)
    r = machine_report(c, beta_h, beta_c, params.scale, omega0, D)
    print(f"{D:7.2f} {r.regime:>12} {r.R_h:12.8f} {r.R_P:12.6f} {r.D:10.6f} {r.D_analytic:10.6f}")
