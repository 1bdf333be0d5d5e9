"""Environment spectra and the memory kernels they induce.

Internal units throughout the package: time in ns, angular frequency in
rad/ns, hbar = k_B = 1 (energies are therefore also in rad/ns).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .errors import KernelConvergenceError, ValidationError

# k_B / hbar in rad ns^-1 K^-1 (about 130.92)
K_B_OVER_HBAR = constants.k / constants.hbar * 1e-9


def thermal_scale(T0):
    """k_B T0 / hbar in rad/ns."""
    return K_B_OVER_HBAR * T0


def fwhm_factor(q):
    """Ratio d / Delta between the full width at half maximum and the width parameter."""
    return 2.0 * math.sqrt((2.0**q - 2.0) / (2.0 * q - 2.0))


def qgaussian_norm(q, Delta):
    """Integral of [1 + (q-1) x^2/Delta^2]^(-1/(q-1)) over the real line (1 < q < 3)."""
    a = 1.0 / (q - 1.0)
    log_ratio = math.lgamma(a - 0.5) - math.lgamma(a)
    return Delta * math.sqrt(math.pi / (q - 1.0)) * math.exp(log_ratio)


@dataclass(frozen=True)
class QGaussianSpectrum:
    """q-Gaussian line J_s(w) = 2 pi Omega^2 C [1 + (q-1)(w - w_s)^2/Delta^2]^(-1/(q-1)).

    ``C`` normalises the bracketed line shape to unit area, so that the
    integral of J_s over all frequencies is 2 pi Omega^2.
    """

    Omega: float
    omega_s: float
    q: float
    d: float
    Delta: float
    C: float

    def line_shape(self, omega):
        x = (np.asarray(omega, dtype=float) - self.omega_s) / self.Delta
        return self.C * (1.0 + (self.q - 1.0) * x * x) ** (-1.0 / (self.q - 1.0))

    def __call__(self, omega):
        return 2.0 * np.pi * self.Omega**2 * self.line_shape(omega)

    @property
    def peak(self):
        return 2.0 * np.pi * self.Omega**2 * self.C


def build_qgaussian(Omega, omega_s, q, d):
    """Build a q-Gaussian spin spectrum from its coupling, centre, shape and FWHM.

    ``Omega = 0`` is accepted and describes an uncoupled ensemble.
    """
    if not 1.0 < q < 2.0:
        raise ValidationError(f"q must lie in (1, 2), got {q}", "q")
    if not Omega >= 0.0:
        raise ValidationError(f"Omega must be non-negative, got {Omega}", "Omega")
    if not omega_s > 0.0:
        raise ValidationError(f"omega_s must be positive, got {omega_s}", "omega_s")
    if not d > 0.0:
        raise ValidationError(f"d must be positive, got {d}", "d")
    Delta = d / fwhm_factor(q)
    C = 1.0 / qgaussian_norm(q, Delta)
    return QGaussianSpectrum(float(Omega), float(omega_s), float(q), float(d), Delta, C)


@dataclass(frozen=True)
class SpectralEnvironment:
    """Spin ensemble plus flat leakage, initially thermal at ``T0`` kelvin.

    With ``thermal_leakage`` the leakage channel also injects thermal noise,
    treated as white noise at the bath occupation of the rotating-frame
    frequency (a flat spectrum weighted by the Bose function has an
    infrared-divergent, unresolvable memory).
    """

    spin: QGaussianSpectrum
    kappa: float
    T0: float
    omega_cut_low: float
    omega_cut_high: float
    thermal_leakage: bool = False

    @property
    def thermal_scale(self):
        return thermal_scale(self.T0)


def make_environment(spin, kappa=0.0, T0=0.0, cutoff_widths=50.0, omega_cut_low=None,
                     omega_cut_high=None, thermal_leakage=False):
    if kappa < 0:
        raise ValidationError(f"kappa must be non-negative, got {kappa}", "kappa")
    if T0 < 0:
        raise ValidationError(f"T0 must be non-negative, got {T0}", "T0")
    lo = max(spin.omega_s - cutoff_widths * spin.d, 0.0) if omega_cut_low is None else omega_cut_low
    hi = spin.omega_s + cutoff_widths * spin.d if omega_cut_high is None else omega_cut_high
    if lo < 0:
        raise ValidationError("omega_cut_low must be non-negative", "omega_cut_low")
    if not (lo < spin.omega_s - 5 * spin.d and spin.omega_s + 5 * spin.d < hi):
        raise ValidationError(
            "integration window must contain omega_s +- 5 d "
            f"(window [{lo}, {hi}], omega_s={spin.omega_s}, d={spin.d})", "cutoff")
    return SpectralEnvironment(spin, float(kappa), float(T0), float(lo), float(hi),
                               bool(thermal_leakage))


def spectral_density(env, omega):
    """Total J(w) = J_s(w) + 2 kappa on positive frequencies."""
    return env.spin(omega) + 2.0 * env.kappa


def bose_occupation(omega, scale):
    """Bose-Einstein occupation 1/(exp(w/scale) - 1); identically zero at zero temperature."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("bose_occupation needs omega > 0")
    if scale < 0:
        raise ValueError("thermal scale must be non-negative")
    if scale == 0:
        return np.zeros_like(omega)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(omega / scale)


@dataclass(frozen=True)
class KernelTable:
    """Rotating-frame memory kernels sampled at lags k*dt, k = 0..n_steps-1.

    ``kappa_local`` is the leakage damping rate, handled as a local term by the
    solver. ``thermal_local`` is the corresponding white-noise strength
    (kappa * nbar(frame_freq)), nonzero only for environments with
    ``thermal_leakage``.
    """

    dt: float
    n_steps: int
    frame_freq: float
    g_vals: np.ndarray
    gt_vals: np.ndarray
    kappa_local: float
    thermal_local: float = 0.0
    quad_points: int = 0
    quad_change: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def lags(self):
        return np.arange(self.n_steps) * self.dt

    def to_csv(self, path):
        write_csv(path, ["lag_ns", "re_g", "im_g", "re_gt", "im_gt"],
                  [self.lags, self.g_vals.real, self.g_vals.imag,
                   self.gt_vals.real, self.gt_vals.imag])


def _nodes(env, h):
    """Trapezoid nodes on the lattice omega_s + j h clipped to the cutoff window."""
    s = env.spin
    j_lo = math.ceil((env.omega_cut_low - s.omega_s) / h)
    j_hi = math.floor((env.omega_cut_high - s.omega_s) / h)
    j = np.arange(j_lo, j_hi + 1)
    omega = s.omega_s + j * h
    if omega[0] <= 0:  # Bose weight undefined at omega = 0
        omega, j = omega[1:], j[1:]
    w = np.full(omega.shape, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return j, omega, w


def _fft_kernels(env, dt, n_steps, frame_freq, n_fft):
    """Trapezoid sums of J_s e^{-i(w - frame)k dt} (and the thermal analogue) via one FFT.

    Frequency step h = 2 pi / (n_fft dt) makes e^{-i j h k dt} an n_fft-point DFT;
    nodes further apart than 2 pi/dt alias onto the same lag samples, so they
    are folded modulo n_fft before transforming.
    """
    h = 2.0 * np.pi / (n_fft * dt)
    j, omega, w = _nodes(env, h)
    dens = w * env.spin(omega)
    therm = dens * bose_occupation(omega, env.thermal_scale)
    idx = (j - j[0]) % n_fft
    buf = np.zeros((2, n_fft), dtype=complex)
    np.add.at(buf[0], idx, dens)
    np.add.at(buf[1], idx, therm)
    spec = np.fft.fft(buf, axis=1)[:, :n_steps]
    k = np.arange(n_steps)
    phase = np.exp(-1j * (omega[0] - frame_freq) * k * dt)
    out = spec * phase / (2.0 * np.pi)
    return out[0], out[1], omega.size


def build_kernels(env, dt, n_steps, frame_freq, tol=1e-8, max_fft=2**24):
    """Tabulate the dissipation and thermal kernels in the frame rotating at ``frame_freq``.

    The frequency integral is a trapezoid rule on a uniform lattice refined by
    doubling until successive tables agree to ``tol`` relative to the zero-lag
    value. Raises KernelConvergenceError naming the worst lag otherwise.
    """
    if dt <= 0:
        raise ValidationError("dt must be positive", "dt")
    if frame_freq <= 0:
        raise ValidationError("frame_freq must be positive", "frame_freq")
    n_steps = int(n_steps)
    local_noise = 0.0
    if env.thermal_leakage and env.T0 > 0:
        local_noise = env.kappa * float(bose_occupation(frame_freq, env.thermal_scale))
    if env.spin.Omega == 0.0:
        z = np.zeros(n_steps, dtype=complex)
        return KernelTable(dt, n_steps, frame_freq, z, z.copy(), env.kappa, local_noise)

    # resolve the line with >= 16 nodes per width parameter and keep aliased
    # lag images at least three horizons away
    n_min = max(4 * n_steps, 16 * 2 * np.pi / (env.spin.Delta * dt), 256)
    n_fft = 1 << int(math.ceil(math.log2(n_min)))
    g, gt, _ = _fft_kernels(env, dt, n_steps, frame_freq, n_fft)
    scale = abs(g[0])
    worst = 0
    while True:
        if 2 * n_fft > max_fft:
            raise KernelConvergenceError(
                f"kernel quadrature did not converge below {tol} with {n_fft}-point lattice",
                lag_index=worst)
        g2, gt2, npts = _fft_kernels(env, dt, n_steps, frame_freq, 2 * n_fft)
        diff = np.maximum(np.abs(g2 - g), np.abs(gt2 - gt))
        worst = int(np.argmax(diff))
        change = float(diff[worst] / scale)
        n_fft *= 2
        g, gt = g2, gt2
        if change < tol:
            break
    return KernelTable(dt, n_steps, frame_freq, g, gt, env.kappa, local_noise,
                       quad_points=npts, quad_change=change,
                       diagnostics={"n_fft": n_fft, "worst_lag": worst})


def kernel_direct(env, tau, frame_freq, step=None):
    """Kernels at arbitrary (possibly negative) lags by a direct trapezoid sum.

    Slow (lags x nodes); used to cross-check the FFT tabulation.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if step is None:
        step = min(env.spin.Delta / 16, np.pi / (4 * max(np.abs(tau).max(), 1.0)))
    _, omega, w = _nodes(env, step)
    dens = w * env.spin(omega) / (2 * np.pi)
    therm = dens * bose_occupation(omega, env.thermal_scale)
    g = np.empty(tau.size, dtype=complex)
    gt = np.empty(tau.size, dtype=complex)
    for i, t in enumerate(tau):
        ph = np.exp(-1j * (omega - frame_freq) * t)
        g[i] = np.sum(dens * ph)
        gt[i] = np.sum(therm * ph)
    return g, gt


def write_csv(path, header, columns, units=None):
    """RFC-4180 CSV, LF line endings, 12 significant digits."""
    cols = [np.asarray(c) for c in columns]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        if units is not None:
            wr.writerow(units)
        for row in zip(*cols):
            wr.writerow([_fmt(x) for x in row])


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    return f"{x:.12g}"
