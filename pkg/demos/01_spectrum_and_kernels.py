"""The spin-ensemble line and the memory kernels it produces.

Run: python demos/01_spectrum_and_kernels.py
"""
import numpy as np

from cavitherm.spectral import (bose_occupation, build_kernels, build_qgaussian,
                                make_environment, thermal_scale)

omega_c = 2 * np.pi * 2.69          # rad/ns
Omega = 17.2 * np.pi * 1e-3         # 17.2 pi MHz
spin = build_qgaussian(Omega, omega_c, q=1.39, d=18.8 * np.pi * 1e-3)
print(f"width parameter Delta = {spin.Delta / np.pi * 1e3:.4f} pi MHz, C = {spin.C:.3f} ns")

# the line is normalised so that its total weight is 2 pi Omega^2
w = spin.omega_s + np.linspace(-60, 60, 200001) * spin.d
print("sum rule  int J dw / 2pi / Omega^2 =", np.trapezoid(spin(w), w) / (2 * np.pi) / Omega**2)

env = make_environment(spin, kappa=0.8 * np.pi * 1e-3, T0=0.1)
print(f"nbar(omega_c, 0.1 K) = {bose_occupation(omega_c, thermal_scale(0.1)):.4f}")

k = build_kernels(env, dt=0.25, n_steps=801, frame_freq=omega_c)
print(f"kernel quadrature: {k.quad_points} nodes, last refinement changed it by {k.quad_change:.1e}")
for tau in (0, 10, 30, 100, 200):
    i = int(tau / 0.25)
    print(f"  tau = {tau:5.1f} ns   g = {k.g_vals[i].real:+.3e}   g_thermal = {k.gt_vals[i].real:+.3e}")
# the kernel at zero lag is the total coupling Omega^2; its slow decay is the memory
