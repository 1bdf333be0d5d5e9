"""Renormalised internal energy, quantum work power and heat currents.

Energies are in hbar rad/ns and powers in hbar rad/ns^2 internally; divide
by omega_c to get the hbar omega_c and hbar omega_c/ns units used for plots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import MasterEqCoefficients
from .errors import ConsistencyError
from .greens import GreensSolution, TimeGrid
from .spectral import write_csv


@dataclass(frozen=True)
class MomentTrace:
    """First and second moments of the cavity field for a coherent initial state.

    ``a_rot`` is the rotating-frame mean field ubar z0 + ybar; ``n_mean`` is
    |<a>|^2 + v(t,t).
    """

    a_rot: np.ndarray
    n_mean: np.ndarray
    z0: complex
    frame_freq: float
    times: np.ndarray

    @property
    def a_mean(self):
        return np.exp(-1j * self.frame_freq * self.times) * self.a_rot


def moments(sol: GreensSolution, z0=0.0):
    # u(t, t0) z0 carries the phase accumulated before t0 in the rotating frame
    z_rot = z0 * np.exp(1j * sol.frame_freq * sol.grid.t0)
    a = sol.u * z_rot + sol.y
    return MomentTrace(a, np.abs(a) ** 2 + sol.v_diag, complex(z0), sol.frame_freq,
                       sol.grid.times)


@dataclass(frozen=True)
class ThermoTrace:
    grid: TimeGrid
    omega_c: float
    E_r: np.ndarray
    E_r_T0: np.ndarray
    P_w_e: np.ndarray
    P_w_d: np.ndarray
    I_h_D: np.ndarray
    I_h_F: np.ndarray
    dE_dt: np.ndarray
    balance_residual: np.ndarray
    flags: np.ndarray
    excluded: np.ndarray

    @property
    def P_w(self):
        return self.P_w_e + self.P_w_d

    @property
    def I_h(self):
        return self.I_h_D + self.I_h_F

    def relative_residual(self):
        """max |residual| / max |dE/dt| over points not flagged or excluded."""
        m = ~self.excluded
        return float(np.abs(self.balance_residual[m]).max() / np.abs(self.dE_dt[m]).max())

    def to_csv(self, path):
        wc = self.omega_c
        cols = {
            "E_r": self.E_r, "P_w_e": self.P_w_e, "P_w_d": self.P_w_d,
            "I_h_D": self.I_h_D, "I_h_F": self.I_h_F, "I_h": self.I_h,
            "balance_residual": self.balance_residual,
        }
        header = ["t_ns"] + list(cols) + ["flag"] + [k + "_hwc" for k in cols]
        units = (["ns"] + ["hbar*rad/ns"] + ["hbar*rad/ns^2"] * 6 + ["1"]
                 + ["hbar*omega_c"] + ["hbar*omega_c/ns"] * 6)
        data = ([self.grid.times] + list(cols.values()) + [self.flags.astype(int)]
                + [c / wc for c in cols.values()])
        write_csv(path, header, data, units=units)


def internal_energy(coeffs: MasterEqCoefficients, mom: MomentTrace):
    """E_r = omega_r <a^+a> + 2 Re(f_r^* <a>) and its zero-temperature part (v dropped)."""
    drive_term = 2.0 * np.real(np.conj(coeffs.f_r_rot) * mom.a_rot)
    E = coeffs.omega_r * mom.n_mean + drive_term
    E0 = coeffs.omega_r * np.abs(mom.a_rot) ** 2 + drive_term
    return E, E0


def work_power(coeffs: MasterEqCoefficients, mom: MomentTrace):
    """Intrinsic <a^+a> d omega_r/dt and driving-induced 2 Re(<a> df_r^*/dt) work power."""
    P_e = mom.n_mean * coeffs.domega_r
    # lab-frame df_r = e^{-i frame t}(df_rot - i frame f_rot)
    P_d = (2.0 * np.real(mom.a_rot * np.conj(coeffs.df_r_rot))
           - 2.0 * coeffs.frame_freq * np.imag(mom.a_rot * np.conj(coeffs.f_r_rot)))
    return P_e, P_d


def heat_currents(coeffs: MasterEqCoefficients, mom: MomentTrace, sol: GreensSolution,
                  E=None, E0=None, rtol=1e-9):
    """Dissipation and fluctuation heat currents plus their sum.

    I_F = omega_r v'(t,t), I_D = -2 gamma (E_r|_{T=0} - Re(f_r^* <a>)). The sum
    is checked against the undivided expression
    omega_r gamma_tilde - 2 gamma (E_r - Re(f_r^* <a>)).
    """
    if E is None or E0 is None:
        E, E0 = internal_energy(coeffs, mom)
    cross = np.real(np.conj(coeffs.f_r_rot) * mom.a_rot)
    I_F = coeffs.omega_r * sol.v_dot
    I_D = -2.0 * coeffs.gamma * (E0 - cross)
    total = I_D + I_F
    direct = coeffs.omega_r * coeffs.gamma_t - 2.0 * coeffs.gamma * (E - cross)
    ok = np.isfinite(direct) & np.isfinite(total)
    if ok.any():
        scale = np.abs(direct[ok]).max()
        err = np.abs(total[ok] - direct[ok]).max()
        if err > rtol * max(scale, 1e-300) and err > 0:
            raise ConsistencyError(
                f"heat channels do not sum to the total heat current (rel. error {err / scale:.2e})")
    return I_D, I_F, total


def balance_residual(E, powers, grid: TimeGrid):
    """dE/dt (central differences) minus the summed work and heat terms; returns (dE/dt, residual)."""
    dE = np.gradient(E, grid.dt, edge_order=2)
    return dE, dE - sum(powers)


def _exclusion_mask(flags, switches, n, halo=2):
    bad = flags.copy()
    for k in np.flatnonzero(flags):
        bad[max(k - 1, 0):k + 2] = True
    for k in switches:
        bad[max(k - halo, 0):k + halo + 1] = True
    return bad


def thermodynamics(sol: GreensSolution, coeffs: MasterEqCoefficients, z0=0.0):
    mom = moments(sol, z0)
    E, E0 = internal_energy(coeffs, mom)
    P_e, P_d = work_power(coeffs, mom)
    I_D, I_F, _ = heat_currents(coeffs, mom, sol, E, E0)
    dE, res = balance_residual(E, [P_e, P_d, I_D, I_F], sol.grid)
    excluded = _exclusion_mask(coeffs.flags, sol.drive.switch_indices(sol.grid), E.size)
    excluded |= ~np.isfinite(res)
    return ThermoTrace(sol.grid, sol.omega_c, E, E0, P_e, P_d, I_D, I_F, dE, res,
                       coeffs.flags, excluded)


@dataclass(frozen=True)
class ClosedCavityTrace:
    times: np.ndarray
    a_mean: np.ndarray
    E: np.ndarray
    P_w: np.ndarray
    I_h: np.ndarray


def closed_cavity_oracle(z0, A, omega_c, omega_d, grid: TimeGrid, phase=0.0):
    """Analytic energy and work power of an isolated cavity under f(t) = A e^{-i(w_d t + phase)}.

    Generic branch for detuning delta = omega_c - omega_d != 0, and its exact
    limit at delta = 0. Times are measured from grid.t0, where the drive
    switches on.
    """
    t = grid.times - grid.t0
    A = A * np.exp(-1j * (omega_d * grid.t0 + phase))  # drive phase at switch-on
    delta = omega_c - omega_d
    rot = np.exp(-1j * omega_c * t)
    if delta == 0.0:
        a = (z0 - 1j * A * t) * rot
        E = (omega_c * abs(z0) ** 2 + 2.0 * np.real(np.conj(A) * z0)
             - 2.0 * omega_c * t * np.imag(np.conj(A) * z0) + omega_c * abs(A) ** 2 * t**2)
        P = 2.0 * abs(A) ** 2 * omega_c * t - 2.0 * np.imag(np.conj(A) * z0) * omega_c
    else:
        ph = np.exp(1j * delta * t)
        a = (z0 + A / delta * (1.0 - ph)) * rot
        E = (omega_c * abs(z0) ** 2
             + 2.0 * np.real(np.conj(A) * z0 / delta * (omega_c - omega_d / ph))
             + 2.0 * abs(A) ** 2 / delta**2 * omega_d * (1.0 - np.cos(delta * t)))
        P = (2.0 * abs(A) ** 2 / delta * omega_d * np.sin(delta * t)
             - 2.0 * np.imag(np.conj(A) * z0 / ph) * omega_d)
    return ClosedCavityTrace(grid.times, a, E, P, np.zeros_like(E))
