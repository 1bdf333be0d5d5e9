"""A driven cavity with no environment: pipeline against closed-form energy and power.

Run: python demos/03_isolated_cavity.py
"""
import numpy as np

from cavitherm import (DriveProtocol, TimeGrid, build_kernels, build_qgaussian,
                       closed_cavity_oracle, compute_coefficients, make_environment,
                       solve_greens, thermodynamics)

omega_c = 2 * np.pi * 2.69
env = make_environment(build_qgaussian(0.0, omega_c, 1.39, 0.06), kappa=0.0, T0=0.1)
grid = TimeGrid.from_horizon(500, 0.25)
kernels = build_kernels(env, grid.dt, grid.n_steps, omega_c)

A = omega_c / 10
for wd, z0 in ((omega_c - 0.3, 4 - 3j), (omega_c, 0.0)):
    sol = solve_greens(kernels, grid, omega_c, DriveProtocol("tone", A, wd))
    th = thermodynamics(sol, compute_coefficients(sol), z0)
    ref = closed_cavity_oracle(z0, A, omega_c, wd, grid)
    dE = np.abs(th.E_r - ref.E).max() / np.abs(ref.E).max()
    dP = np.abs(th.P_w - ref.P_w).max() / np.abs(ref.P_w).max()
    print(f"detuning {omega_c - wd:+.2f} rad/ns: rel. error E {dE:.1e}, P {dP:.1e}, "
          f"max|heat| {np.abs(th.I_h).max():.1e}")

# On resonance from vacuum the energy grows like t^2 and the power like t.
print("E(500 ns) / (|A|^2 w_c t^2) =", th.E_r[-1] / (A**2 * omega_c * 500.0**2))
