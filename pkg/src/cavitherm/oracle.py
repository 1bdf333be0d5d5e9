"""Brute-force check of the Green-function solver with a finite bath.

The spin spectrum is cut into M frequency bins; each bin becomes one bosonic
mode whose squared coupling carries the bin's share of the spectral weight. The cavity
plus M modes form a closed linear system that is diagonalised once and
propagated exactly. Before the recurrence time 2 pi / (bin spacing) the
cavity block of that propagator approximates the continuum u(t) and v(t,t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .errors import ValidationError
from .greens import TimeGrid
from .spectral import SpectralEnvironment, bose_occupation, thermal_scale, write_csv

MIN_COVERAGE = 0.999


@dataclass(frozen=True)
class DiscreteBath:
    """Bath modes at ``omega`` (rad/ns, increasing) with couplings ``g`` (rad/ns)."""

    omega: np.ndarray
    g: np.ndarray
    T0: float
    spacing: float = 0.0
    coverage: float = 1.0

    @property
    def n_modes(self):
        return self.omega.size

    @property
    def total_weight(self):
        """Sum of |g_j|^2; approximates the integral of J over the window divided by 2 pi."""
        return float(np.sum(np.abs(self.g) ** 2))

    @property
    def recurrence_time(self):
        if self.spacing <= 0:
            return np.inf
        return 2.0 * np.pi / self.spacing


def _spin_mass(spin, lo, hi):
    """Integral of J_s over [lo, hi] divided by 2 pi, i.e. Omega^2 times the line's probability mass."""
    nu = (3.0 - spin.q) / (spin.q - 1.0)
    scale = spin.Delta / np.sqrt(3.0 - spin.q)
    dist = stats.t(nu, loc=spin.omega_s, scale=scale)
    return spin.Omega**2 * (dist.cdf(hi) - dist.cdf(lo))


def default_window(spin, M):
    """omega_s +- 5 d for up to 64 modes, widened like sqrt(M) beyond.

    Growing the window with sqrt(M) lets the recurrence time and the covered
    spectral weight improve together as modes are added.
    """
    half = 5.0 * spin.d * max(1.0, np.sqrt(M / 64.0))
    return spin.omega_s - half, spin.omega_s + half


def discretize(env: SpectralEnvironment, M, window=None, weights="sample",
               include_leakage=False, leakage_modes=None):
    """Bin the spectrum over ``window = (lo, hi)`` into ``M`` modes at the bin centres.

    ``weights="sample"`` sets |g_j|^2 = h J(omega_j) / 2 pi (midpoint rule),
    whose kernel error away from the window edges is spectrally small for lags
    below half the recurrence time. ``weights="bin_mass"`` uses the exact
    bin integral of J / 2 pi instead; that preserves each bin's weight but
    adds an interior error growing like (h tau)^2.

    With ``include_leakage`` the flat 2 kappa background is added to every bin
    and to ``leakage_modes`` extra bins of the same width on either side (a
    crude comb; the leakage memory is only reproduced up to the recurrence
    time).
    """
    spin = env.spin
    if M < 1:
        raise ValidationError(f"need at least one mode, got M={M}", "M")
    if weights not in ("sample", "bin_mass"):
        raise ValidationError(f"unknown weighting {weights!r}", "weights")
    if window is None:
        window = default_window(spin, M)
    lo, hi = map(float, window)
    if not 0.0 < lo < hi:
        raise ValidationError(f"bad window {window}", "window")
    coverage = 1.0 if spin.Omega == 0.0 else _spin_mass(spin, lo, hi) / spin.Omega**2
    if coverage < MIN_COVERAGE:
        raise ValidationError(
            f"window covers {coverage:.5f} of the spin spectrum, need {MIN_COVERAGE}", "window")
    edges = np.linspace(lo, hi, M + 1)
    h = edges[1] - edges[0]
    centres = 0.5 * (edges[:-1] + edges[1:])
    if spin.Omega == 0.0:
        weight = np.zeros(M)
    elif weights == "sample":
        weight = h * spin(centres) / (2.0 * np.pi)
    else:
        nu = (3.0 - spin.q) / (spin.q - 1.0)
        cdf = stats.t.cdf(edges, nu, loc=spin.omega_s, scale=spin.Delta / np.sqrt(3.0 - spin.q))
        weight = spin.Omega**2 * np.diff(cdf)
    if include_leakage and env.kappa > 0:
        flat = 2.0 * env.kappa * h / (2.0 * np.pi)
        n_extra = M if leakage_modes is None else int(leakage_modes)
        below = lo - h * (np.arange(n_extra, 0, -1) - 0.5)
        below = below[below > 0]
        above = hi + h * (np.arange(n_extra) + 0.5)
        centres = np.concatenate([below, centres, above])
        weight = np.concatenate([np.full(below.size, flat), weight + flat,
                                 np.full(above.size, flat)])
    return DiscreteBath(centres, np.sqrt(weight), env.T0, h, coverage)


def sum_rule_error(env: SpectralEnvironment, bath: DiscreteBath):
    """Relative mismatch between sum |g_j|^2 and a quadrature of J_s/(2 pi) over the bath's span."""
    spin = env.spin
    if spin.Omega == 0.0:
        return 0.0
    lo = bath.omega[0] - bath.spacing / 2
    hi = bath.omega[-1] + bath.spacing / 2
    exact, _ = integrate.quad(lambda w: spin(w) / (2 * np.pi), lo, hi,
                              points=[spin.omega_s], limit=200)
    return abs(bath.total_weight - exact) / exact


@dataclass(frozen=True)
class OraclePropagator:
    """Eigen-decomposition of the rotating-frame single-particle matrix."""

    eigvals: np.ndarray
    eigvecs: np.ndarray
    frame_freq: float

    def amplitudes(self, times):
        """U_{0j}(t) for all modes j (column 0 is the cavity itself)."""
        ph = np.exp(-1j * np.outer(times, self.eigvals))
        return (ph * self.eigvecs[0]) @ self.eigvecs.conj().T


def single_particle_matrix(bath: DiscreteBath, omega_c, frame_freq):
    n = bath.n_modes
    H = np.zeros((n + 1, n + 1))
    H[0, 0] = omega_c - frame_freq
    H[1:, 1:][np.diag_indices(n)] = bath.omega - frame_freq
    H[0, 1:] = bath.g
    H[1:, 0] = bath.g
    return H


def propagator(bath: DiscreteBath, omega_c, frame_freq=None):
    frame_freq = omega_c if frame_freq is None else frame_freq
    w, V = np.linalg.eigh(single_particle_matrix(bath, omega_c, frame_freq))
    return OraclePropagator(w, V, frame_freq)


def propagate_u(bath: DiscreteBath, omega_c, grid: TimeGrid, frame_freq=None):
    """Rotating-frame cavity propagator ubar(t) = U_00(t - t0)."""
    P = propagator(bath, omega_c, frame_freq)
    return P.amplitudes(grid.times - grid.t0)[:, 0]


def propagate_v(bath: DiscreteBath, omega_c, grid: TimeGrid, T0=None, frame_freq=None):
    """v(t,t) = sum_j nbar(omega_j) |U_0j(t)|^2 over the bath modes."""
    T0 = bath.T0 if T0 is None else T0
    P = propagator(bath, omega_c, frame_freq)
    U = P.amplitudes(grid.times - grid.t0)
    nbar = bose_occupation(bath.omega, thermal_scale(T0)) if bath.n_modes else np.zeros(0)
    return np.abs(U[:, 1:]) ** 2 @ nbar


def unitarity_drift(bath: DiscreteBath, omega_c, times):
    """Largest deviation of sum_j |U_0j(t)|^2 from one."""
    U = propagator(bath, omega_c).amplitudes(np.asarray(times, dtype=float))
    return float(np.abs(np.sum(np.abs(U) ** 2, axis=1) - 1.0).max())


@dataclass(frozen=True)
class OracleReport:
    M: int
    recurrence_time: float
    compared_until: float
    u_deviation: float
    v_deviation: float
    sum_rule_error: float
    times: np.ndarray
    u_oracle: np.ndarray
    v_oracle: np.ndarray
    u_solver: np.ndarray
    v_solver: np.ndarray

    def as_dict(self):
        out = {k: float(getattr(self, k)) for k in
               ("recurrence_time", "compared_until", "u_deviation", "v_deviation",
                "sum_rule_error")}
        return {"M": int(self.M), **out}

    def to_csv(self, path):
        write_csv(path, ["t_ns", "re_u_oracle", "im_u_oracle", "re_u_solver", "im_u_solver",
                         "v_oracle", "v_solver"],
                  [self.times, self.u_oracle.real, self.u_oracle.imag, self.u_solver.real,
                   self.u_solver.imag, self.v_oracle, self.v_solver])


def compare(env: SpectralEnvironment, sol, M, window=None, weights="sample"):
    """Deviation of a solver run from the M-mode oracle, restricted to t < t_rec / 2.

    ``sol`` is a GreensSolution computed for ``env``; raises ValidationError if the
    whole run lies beyond half the recurrence time.
    """
    bath = discretize(env, M, window, weights)
    t_rec = bath.recurrence_time
    t_rel = sol.grid.times - sol.grid.t0
    keep = t_rel < 0.5 * t_rec
    if not keep[1:].any():
        raise ValidationError(
            f"recurrence time {t_rec:.1f} ns leaves nothing to compare", "modes")
    P = propagator(bath, sol.omega_c, sol.frame_freq)
    U = P.amplitudes(t_rel[keep])
    u_o = U[:, 0]
    nbar = bose_occupation(bath.omega, thermal_scale(env.T0))
    v_o = np.abs(U[:, 1:]) ** 2 @ nbar
    du = float(np.abs(u_o - sol.u[keep]).max())
    dv = float(np.abs(v_o - sol.v_diag[keep]).max())
    return OracleReport(M, t_rec, float(t_rel[keep][-1]), du, dv, sum_rule_error(env, bath),
                        sol.grid.times[keep], u_o, v_o, sol.u[keep], sol.v_diag[keep])
