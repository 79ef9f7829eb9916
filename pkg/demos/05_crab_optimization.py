"""Optimize a CRAB pulse for the hot-current TUR ratio.

Runs a reduced budget (2 restarts, 300 iterations) so it finishes in
seconds; the CLI config configs/crab_scan.ini uses the full settings.
"""
from floquet_tur.bath import MachineParams
from floquet_tur.crab import OptimizationConfig, optimize_pulse
from floquet_tur.fcs import cumulants_analytic
from floquet_tur.metrics import tur_ratios
from floquet_tur.modulation import sinusoidal_three_mode

params = MachineParams(30.0, 0.005, 0.01)
for i, D in enumerate((1.0, 2.0, 3.0)):
    cfg = OptimizationConfig(target="R_h", Delta=D, N=10, mu=1.0, restarts=2,
                             max_iters=300, seed=42, delta_index=i)
    pulse = optimize_pulse(cfg, params)
    base = tur_ratios(cumulants_analytic(sinusoidal_three_mode(30.0, 0.02, D),
                                         *params.split_baths()), params.scale)[0]
    print(f"Delta={D}: R_h {pulse.history[0]:.4f} -> {pulse.objective_value:.6f} "
          f"(sinusoidal {base:.6f}), P = {pulse.cumulants.P:.3e}, "
          f"{pulse.report.regime}, restart {pulse.restart_index}")
