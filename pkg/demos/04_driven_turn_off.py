"""Driving the cavity and switching the drive off at 900 ns.

Run: python demos/04_driven_turn_off.py
"""
import numpy as np
from scipy.signal import argrelmax

from cavitherm.scenarios import load_preset, simulate
from cavitherm.thermo import moments

for name in ("fig6", "fig7", "fig8", "fig9"):
    res = simulate(load_preset(name))
    t = res.solution.grid.times
    wc = res.scenario.physical.omega_c
    a = np.abs(moments(res.solution, 0.0).a_rot)
    after = t >= 900
    steady = (t > 700) & (t < 890)
    print(f"--- {name}: drive at {res.solution.drive.drive_freq:.5f} rad/ns "
          f"(w_c = {wc:.5f})")
    print(f"  |<a>| before switch-off            = {a[t <= 900][-1]:.2f}")
    print(f"  mean drive work power [hbar w_c/ns] = {np.nanmean(res.thermo.P_w_d[steady]) / wc:.3g}")
    print(f"  maxima of |<a>| after switch-off    = {len(argrelmax(a[after])[0])}")
    print(f"  maxima of E_r after switch-off      = {len(argrelmax(res.thermo.E_r[after])[0])}")
    if name == "fig9":
        y, fr = res.solution.y, res.coefficients.f_r_rot
        print(f"  max|Re y|/max|Im y|                 = {abs(y.real).max() / abs(y.imag).max():.1e}")
        print(f"  max|Im f_r|/max|Re f_r|             = "
              f"{np.nanmax(abs(fr.imag)) / np.nanmax(abs(fr.real)):.1e}")

# Strong coupling: energy returns from the spins after the drive stops and the
# field oscillates. Weak coupling: plain decay.
