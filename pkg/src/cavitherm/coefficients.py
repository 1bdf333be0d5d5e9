"""Time-dependent coefficients of the exact master equation.

All ratios involve 1/u, so they are singular where u(t) vanishes. Points
with |u| below ``u_floor``, or closer to a zero crossing than half a time
step (|u| < |u'| dt / 2), are flagged and their coefficients set to NaN; no
regularisation is attempted. The second test matters when u is real and
crosses zero: there the rounding noise in Im u is amplified like 1/|u|^3 in
d omega_r/dt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .greens import GreensSolution, TimeGrid
from .spectral import write_csv


@dataclass(frozen=True)
class MasterEqCoefficients:
    """Renormalised frequency, dissipation/fluctuation rates and renormalised drive.

    ``f_r_rot`` and ``df_r_rot`` are the slowly varying rotating-frame amplitudes
    (f_r(t) = exp(-i frame t) f_r_rot(t)); the lab-frame series are available
    as ``f_r`` and ``df_r``.
    """

    grid: TimeGrid
    frame_freq: float
    omega_r: np.ndarray
    gamma: np.ndarray
    gamma_t: np.ndarray
    f_r_rot: np.ndarray
    domega_r: np.ndarray
    df_r_rot: np.ndarray
    flags: np.ndarray

    @property
    def _phase(self):
        return np.exp(-1j * self.frame_freq * self.grid.times)

    @property
    def f_r(self):
        return self._phase * self.f_r_rot

    @property
    def df_r(self):
        """Lab-frame d f_r / dt."""
        return self._phase * (self.df_r_rot - 1j * self.frame_freq * self.f_r_rot)

    def to_csv(self, path):
        write_csv(path, ["t_ns", "omega_r", "gamma", "gamma_tilde", "re_fr", "im_fr", "flag"],
                  [self.grid.times, self.omega_r, self.gamma, self.gamma_t,
                   self.f_r_rot.real, self.f_r_rot.imag, self.flags.astype(int)])


def _log_derivative(sol, u_floor):
    au = np.abs(sol.u)
    flags = (au < u_floor) | (au < 0.5 * sol.grid.dt * np.abs(sol.udot))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(flags, np.nan, sol.udot / np.where(flags, 1.0, sol.u))
    return r, flags


def extract_rate_and_frequency(sol: GreensSolution, u_floor=1e-8):
    """omega_r = frame - Im(ubar'/ubar), gamma = -Re(ubar'/ubar); returns (omega_r, gamma, flags)."""
    r, flags = _log_derivative(sol, u_floor)
    return sol.frame_freq - r.imag, -r.real, flags


def extract_gamma_tilde(sol: GreensSolution, gamma):
    """gamma_tilde = v' + 2 gamma v (the c.c. sum keeps only the real part of u'/u)."""
    return sol.v_dot + 2.0 * gamma * sol.v_diag


def extract_f_r(sol: GreensSolution, u_floor=1e-8):
    """Rotating-frame renormalised drive f_r = i (ybar' - (ubar'/ubar) ybar)."""
    r, _ = _log_derivative(sol, u_floor)
    return 1j * (sol.ydot - r * sol.y)


def coefficient_derivatives(sol: GreensSolution, u_floor=1e-8):
    """d omega_r/dt and d f_r_rot/dt from the second derivatives of the Green functions.

    With r = u'/u: r' = u''/u - r^2, omega_r' = -Im r', and
    f_r_rot' = i (y'' - r' y - r y'). Pointwise, so poles of the
    coefficients at near-zeros of u cancel algebraically in the thermodynamic
    combinations instead of being smeared by a difference stencil.
    """
    r, flags = _log_derivative(sol, u_floor)
    with np.errstate(invalid="ignore"):
        rdot = np.where(flags, np.nan, sol.uddot / np.where(flags, 1.0, sol.u)) - r * r
    domega = -rdot.imag
    df = 1j * (sol.yddot - rdot * sol.y - r * sol.ydot)
    return domega, df


def finite_difference_derivatives(coeffs: MasterEqCoefficients, max_gap=3):
    """Central-difference d omega_r/dt and d f_r_rot/dt honouring flagged points.

    Interior points use the centred three-point stencil, boundaries and points
    next to a flag use a one-sided second-order stencil, and where that is not
    available a first-order two-point stencil. Flagged points, and points
    inside a flagged run longer than ``max_gap``, come back as NaN. Returns
    (domega, df, order) with ``order`` the accuracy order used per point
    (0 = unavailable).
    """
    dt = coeffs.grid.dt
    ok = ~coeffs.flags
    n = ok.size
    order = np.zeros(n, dtype=int)
    out = []
    for x in (coeffs.omega_r.astype(complex), coeffs.f_r_rot):
        d = np.full(n, np.nan, dtype=complex)
        for i in range(n):
            if not ok[i]:
                continue
            L = i >= 1 and ok[i - 1]
            R = i + 1 < n and ok[i + 1]
            if L and R:
                d[i] = (x[i + 1] - x[i - 1]) / (2 * dt)
                order[i] = 2
            elif R and i + 2 < n and ok[i + 2]:
                d[i] = (-3 * x[i] + 4 * x[i + 1] - x[i + 2]) / (2 * dt)
                order[i] = 2
            elif L and i >= 2 and ok[i - 2]:
                d[i] = (3 * x[i] - 4 * x[i - 1] + x[i - 2]) / (2 * dt)
                order[i] = 2
            elif R:
                d[i] = (x[i + 1] - x[i]) / dt
                order[i] = 1
            elif L:
                d[i] = (x[i] - x[i - 1]) / dt
                order[i] = 1
        out.append(d)
    # long flagged runs: derivative unavailable across the span
    flagged = ~ok
    i = 0
    while i < n:
        if flagged[i]:
            j = i
            while j < n and flagged[j]:
                j += 1
            if j - i > max_gap:
                lo, hi = max(i - 1, 0), min(j + 1, n)
                for d in out:
                    d[lo:hi] = np.nan
                order[lo:hi] = 0
            i = j
        else:
            i += 1
    return out[0].real, out[1], order


def compute_coefficients(sol: GreensSolution, u_floor=1e-8):
    omega_r, gamma, flags = extract_rate_and_frequency(sol, u_floor)
    gamma_t = extract_gamma_tilde(sol, gamma)
    f_r = extract_f_r(sol, u_floor)
    domega, df = coefficient_derivatives(sol, u_floor)
    return MasterEqCoefficients(sol.grid, sol.frame_freq, omega_r, gamma, gamma_t, f_r,
                                domega, df, flags)
