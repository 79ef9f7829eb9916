"""Gillespie trajectories against the analytic cumulants.

One trajectory of 10^6 jumps on each side of the crossover; every z-score
should lie within +-4.
"""
from floquet_tur.bath import MachineParams
from floquet_tur.fcs import cumulants_analytic
from floquet_tur.modulation import ModulationSpec, floquet_spectrum
from floquet_tur.montecarlo import build_channels, compare_with_analytic, simulate_counting

hot, cold = MachineParams(30.0, 0.005, 0.01).split_baths()
for D in (5.0, 15.0):
    sp = floquet_spectrum(ModulationSpec.sinusoidal(30.0, 0.02, D))
    chans = build_channels(sp, hot, cold)
    s = simulate_counting(chans, 1_000_000, seed=7)
    a = cumulants_analytic(sp, hot, cold)
    z = compare_with_analytic(s, a)
    print(f"Delta={D}: {len(chans)} channels, J_h MC {s.J_h:.4e} vs {a.J_h:.4e}")
    print("   z: " + ", ".join(f"{k}={v:+.2f}" for k, v in z.items()))
