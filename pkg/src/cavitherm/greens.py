"""Nonequilibrium Green functions u, y and v(t,t) of the damped cavity.

Everything is solved in the frame rotating at ``frame_freq`` (normally the
bare cavity frequency), where u(t, t0) = exp(-i frame (t - t0)) * ubar(t - t0)
and the environment memory varies on the slow coupling scale. The kernels
are stationary, so the two-time propagator is u(t, tau) = u(t - tau, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NumericalError, ValidationError
from .spectral import build_kernels, write_csv


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    dt: float
    n_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt must be positive", "dt")
        if self.n_steps < 2:
            raise ValidationError("need at least two grid points", "n_steps")

    @classmethod
    def from_horizon(cls, horizon, dt, t0=0.0):
        return cls(float(t0), float(dt), int(round(horizon / dt)) + 1)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.n_steps)

    @property
    def horizon(self):
        return self.dt * (self.n_steps - 1)

    def index_of(self, t, what="time"):
        """Grid index of an absolute time; the time must sit on a grid point."""
        x = (t - self.t0) / self.dt
        k = int(round(x))
        if abs(x - k) > 1e-9 * max(1.0, abs(x)):
            raise ValidationError(f"{what}={t} ns is not on the time grid (dt={self.dt})", what)
        return k

    def refined(self):
        return TimeGrid(self.t0, self.dt / 2, 2 * self.n_steps - 1)


@dataclass(frozen=True)
class DriveProtocol:
    """Drive f(t) = A exp(-i(w_d t + phase)) on [t_on, t_off], zero elsewhere.

    Amplitudes are in rad/ns (f/hbar). ``kind='off'`` is the undriven cavity.
    """

    kind: str = "off"
    amplitude: float = 0.0
    drive_freq: float = 0.0
    t_on: float = 0.0
    t_off: float = np.inf
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("off", "tone"):
            raise ValidationError(f"unknown drive kind {self.kind!r}", "drive.kind")
        if self.kind == "tone":
            if self.amplitude < 0:
                raise ValidationError("drive amplitude must be non-negative", "drive.amplitude")
            if not self.t_on < self.t_off:
                raise ValidationError("drive needs t_on < t_off", "drive.t_off")

    @classmethod
    def off(cls):
        return cls()

    @property
    def active(self):
        return self.kind == "tone" and self.amplitude > 0

    def lab(self, t):
        t = np.asarray(t, dtype=float)
        if not self.active:
            return np.zeros(t.shape, dtype=complex)
        on = (t >= self.t_on) & (t <= self.t_off)
        return np.where(on, self.amplitude * np.exp(-1j * (self.drive_freq * t + self.phase)), 0)

    def support(self, grid):
        """Grid indices (k_on, k_off) of the drive window clipped to the grid, or None."""
        if not self.active:
            return None
        t_end = grid.times[-1]
        if self.t_on > t_end or self.t_off < grid.t0:
            return None
        k_on = grid.index_of(self.t_on, "drive.t_on") if self.t_on > grid.t0 else 0
        k_off = (grid.index_of(self.t_off, "drive.t_off") if self.t_off < t_end
                 else grid.n_steps - 1)
        return k_on, k_off

    def switch_indices(self, grid):
        """Indices where the drive switches on or off inside the grid interior."""
        sup = self.support(grid)
        if sup is None:
            return []
        k_on, k_off = sup
        out = []
        if self.t_on > grid.t0:
            out.append(k_on)
        if self.t_off < grid.times[-1]:
            out.append(k_off)
        return out


@dataclass(frozen=True)
class GreensSolution:
    """Rotating-frame Green functions on a grid.

    ``u, udot, uddot`` are ubar and its first two derivatives (from the
    equation of motion, not from differencing); ``y, ydot, yddot`` likewise
    for the drive-induced field; ``v_diag, v_dot`` are v(t,t) and its
    derivative.
    """

    grid: TimeGrid
    frame_freq: float
    omega_c: float
    u: np.ndarray
    udot: np.ndarray
    uddot: np.ndarray
    y: np.ndarray
    ydot: np.ndarray
    yddot: np.ndarray
    v_diag: np.ndarray
    v_dot: np.ndarray
    drive: DriveProtocol

    @property
    def rotation(self):
        return np.exp(-1j * self.frame_freq * (self.grid.times - self.grid.t0))

    @property
    def u_lab(self):
        return self.rotation * self.u

    @property
    def y_lab(self):
        return np.exp(-1j * self.frame_freq * self.grid.times) * self.y

    def to_csv(self, path):
        write_csv(path, ["t_ns", "re_u", "im_u", "re_y", "im_y", "v", "v_dot"],
                  [self.grid.times, self.u.real, self.u.imag, self.y.real, self.y.imag,
                   self.v_diag, self.v_dot])


def _trap_conv(kernel, x, dt):
    """Trapezoid approximations of int_0^{t_n} k(t_n - s) x(s) ds for every n."""
    n = x.size
    full = np.convolve(kernel[:n], x)[:n]
    out = dt * (full - 0.5 * kernel[:n] * x[0] - 0.5 * kernel[0] * x)
    out[0] = 0.0
    return out


def solve_u(kernels, grid, omega_c):
    """Solve d ubar/dt = -(kappa + i(omega_c - frame)) ubar - int_0^t gbar(t - s) ubar(s) ds, ubar(0) = 1.

    Trapezoidal predictor-corrector with trapezoidal memory sums; since the
    equation is linear the corrector is solved exactly rather than iterated.
    """
    g = _check_kernels(kernels, grid)
    n = grid.n_steps
    dt = grid.dt
    c = kernels.kappa_local + 1j * (omega_c - kernels.frame_freq)
    u = np.empty(n, dtype=complex)
    f = np.empty(n, dtype=complex)
    u[0] = 1.0
    f[0] = -c
    denom = 1.0 + 0.5 * dt * (c + 0.5 * dt * g[0])
    for m in range(n - 1):
        # memory terms of step m+1 that do not involve u[m+1]
        s = 0.5 * g[m + 1] * u[0]
        if m > 0:
            s += np.sum(g[m:0:-1] * u[1:m + 1])
        rhs = u[m] + 0.5 * dt * (f[m] - dt * s)
        u[m + 1] = rhs / denom
        f[m + 1] = -c * u[m + 1] - dt * (s + 0.5 * g[0] * u[m + 1])
    return u


def u_derivative(u, kernels, grid, omega_c):
    """d ubar/dt from the right-hand side of the integro-differential equation."""
    g = _check_kernels(kernels, grid)
    c = kernels.kappa_local + 1j * (omega_c - kernels.frame_freq)
    return -c * u - _trap_conv(g, u, grid.dt)


def u_second_derivative(u, udot, kernels, grid, omega_c):
    """d^2 ubar/dt^2 = -c ubar' - g(t) ubar(0) - int_0^t g(s) ubar'(t - s) ds."""
    g = _check_kernels(kernels, grid)
    c = kernels.kappa_local + 1j * (omega_c - kernels.frame_freq)
    return -c * udot - g[:u.size] * u[0] - _trap_conv(g, udot, grid.dt)


def _check_kernels(kernels, grid):
    if abs(kernels.dt - grid.dt) > 1e-12 * grid.dt:
        raise ValidationError("kernel table and time grid use different steps", "dt")
    if kernels.n_steps < grid.n_steps:
        raise ValidationError("kernel table shorter than the time grid", "n_steps")
    return kernels.g_vals


def _product_weights(theta):
    """int_0^1 (1-s) e^{i theta s} ds and int_0^1 s e^{i theta s} ds."""
    if abs(theta) < 1e-2:
        k = np.arange(12)
        fact = np.cumprod(np.r_[1.0, np.arange(1, 12)])
        terms = (1j * theta) ** k / fact
        b = np.sum(terms / (k + 2))
        a = np.sum(terms / (k + 1)) - b
        return complex(a), complex(b)
    e = np.exp(1j * theta)
    total = (e - 1) / (1j * theta)
    b = e / (1j * theta) + (e - 1) / theta**2
    return complex(total - b), complex(b)


def drive_envelope(drive, grid, frame_freq):
    """Rotating-frame drive fbar(t) = f(t) exp(i frame t) on the grid, ignoring the support."""
    t = grid.times
    return drive.amplitude * np.exp(1j * ((frame_freq - drive.drive_freq) * t - drive.phase))


def drive_convolution(w, drive, grid, frame_freq):
    """int over the drive window (up to t) of w(t - tau) fbar(tau) d tau, for every grid time.

    Product integration: w is linear between grid points, the tone envelope
    is integrated exactly, so a constant w gives the exact result.
    """
    n = grid.n_steps
    sup = drive.support(grid)
    if sup is None:
        return np.zeros(n, dtype=complex)
    k_on, k_off = sup
    theta = (frame_freq - drive.drive_freq) * grid.dt
    alpha, beta = _product_weights(theta)
    fb = drive_envelope(drive, grid, frame_freq)
    p = np.zeros(n, dtype=complex)
    q = np.zeros(n, dtype=complex)
    p[k_on:k_off] = alpha * fb[k_on:k_off]
    q[k_on + 1:k_off + 1] = beta * fb[k_on:k_off]
    out = np.convolve(p + q, w[:n])[:n] - p * w[0]
    return grid.dt * out


def _check_resolution(drive, grid, frame_freq):
    if drive.active and abs(drive.drive_freq - frame_freq) * grid.dt > 0.5:
        raise ValidationError(
            "drive frequency too far from the rotating frame for this time step "
            f"(|w_d - frame| dt = {abs(drive.drive_freq - frame_freq) * grid.dt:.3g} > 0.5 rad)",
            "drive.drive_freq")


def solve_y(u, drive, grid, frame_freq):
    """ybar(t) = -i int_{t0}^t ubar(t - tau) fbar(tau) d tau."""
    _check_resolution(drive, grid, frame_freq)
    return -1j * drive_convolution(u, drive, grid, frame_freq)


def y_derivatives(udot, uddot, drive, grid, frame_freq):
    """First and second derivatives of ybar by differentiating under the integral.

    ybar'  = -i [fbar(t) + int ubar'(t - tau) fbar(tau)]
    ybar'' = -i [fbar'(t) + ubar'(0) fbar(t) + int ubar''(t - tau) fbar(tau)]

    Inside the window the local terms use the drive value; at the switch-off
    point the left limit is used.
    """
    n = grid.n_steps
    ydot = -1j * drive_convolution(udot, drive, grid, frame_freq)
    yddot = -1j * drive_convolution(uddot, drive, grid, frame_freq)
    sup = drive.support(grid)
    if sup is None:
        return ydot, yddot
    k_on, k_off = sup
    on = np.zeros(n, dtype=bool)
    on[k_on:k_off + 1] = True
    fb = np.where(on, drive_envelope(drive, grid, frame_freq), 0)
    fb_dot = 1j * (frame_freq - drive.drive_freq) * fb
    ydot = ydot - 1j * fb
    yddot = yddot - 1j * (fb_dot + udot[0] * fb)
    return ydot, yddot


def _toeplitz_matvec(col, x):
    """(T x) for the Hermitian Toeplitz matrix T_ij = col[j - i] (col[-k] = conj(col[k])), via FFT."""
    m = x.size
    c = np.concatenate([np.conj(col[:m]), [0.0], col[m - 1:0:-1]])
    # circulant first column: T_i0 = col[-i] = conj(col[i])
    return np.fft.ifft(np.fft.fft(c) * np.fft.fft(x, c.size))[:m]


def v_quadratic_form(u, gt, dt, n, local_noise=0.0):
    """v(t_n, t_n) as one trapezoid-weighted Hermitian quadratic form (FFT Toeplitz product).

    Returns the complex value so callers can check that the imaginary part vanishes.
    """
    if n == 0:
        return 0.0 + 0.0j
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    x = w * u[:n + 1]
    # v = sum_ij x_i G_ij conj(x_j) with G_ij = gt[j - i]
    tx = _toeplitz_matvec(gt, np.conj(x))
    val = dt * dt * np.sum(x * tx)
    if local_noise:
        val += 2.0 * local_noise * dt * np.sum(w * np.abs(u[:n + 1]) ** 2)
    return val


def solve_v_diag(u, kernels, grid, method="recursive", check=True):
    """v(t,t) = int int ubar(s1) gtbar(s2 - s1) conj(ubar(s2)) ds1 ds2 over [0, t - t0]^2, and its derivative.

    ``method='recursive'`` grows the trapezoid quadratic form one row at a
    time (O(N^2) total); ``method='fft'`` re-evaluates it at every t with an
    FFT Toeplitz product (O(N^2 log N)). Leakage white noise, when present,
    adds 2 kappa nbar int_0^t |ubar|^2. The derivative is a central
    difference, second-order one-sided at the ends.
    """
    _check_kernels(kernels, grid)
    gt = kernels.gt_vals
    n = grid.n_steps
    dt = grid.dt
    v = np.zeros(n)
    if method == "fft":
        vc = np.array([v_quadratic_form(u, gt, dt, m, kernels.thermal_local) for m in range(n)])
        scale = max(np.abs(vc).max(), 1e-300)
        if check and np.abs(vc.imag).max() > 1e-12 * scale:
            raise NumericalError("thermal quadratic form has a non-vanishing imaginary part")
        v = vc.real
    elif method == "recursive":
        if np.any(gt != 0):
            b = u[:n].copy()
            b[0] *= 0.5
            total = 0.25 * abs(u[0]) ** 2 * gt[0].real
            for m in range(1, n):
                r = np.sum(b[:m] * gt[m:0:-1])
                cross = (r * np.conj(u[m])).real
                sq = abs(u[m]) ** 2 * gt[0].real
                v[m] = dt * dt * (total + cross + 0.25 * sq)
                total += 2.0 * cross + sq
        if kernels.thermal_local:
            a2 = np.abs(u[:n]) ** 2
            cum = np.concatenate([[0.0], np.cumsum(0.5 * dt * (a2[1:] + a2[:-1]))])
            v = v + 2.0 * kernels.thermal_local * cum
    else:
        raise ValueError(f"unknown method {method!r}")
    if check and v.min() < -1e-10:
        k = int(np.argmin(v))
        raise NumericalError(f"v(t,t) = {v[k]:.3e} < 0 at t = {grid.times[k]} ns")
    v_dot = np.gradient(v, dt, edge_order=2)
    return v, v_dot


def solve_greens(kernels, grid, omega_c, drive=None):
    drive = drive or DriveProtocol.off()
    frame = kernels.frame_freq
    _check_resolution(drive, grid, frame)
    u = solve_u(kernels, grid, omega_c)
    udot = u_derivative(u, kernels, grid, omega_c)
    uddot = u_second_derivative(u, udot, kernels, grid, omega_c)
    y = solve_y(u, drive, grid, frame)
    ydot, yddot = y_derivatives(udot, uddot, drive, grid, frame)
    v, v_dot = solve_v_diag(u, kernels, grid)
    return GreensSolution(grid, frame, omega_c, u, udot, uddot, y, ydot, yddot, v, v_dot, drive)


def step_halving(env, grid, omega_c, drive=None, tol=None, frame_freq=None):
    """Re-solve on a grid with half the step; return max changes of ubar, ybar, v on shared points.

    Raises ConvergenceError if any change exceeds ``tol`` (when given).
    """
    frame = omega_c if frame_freq is None else frame_freq
    fine = grid.refined()
    sols = []
    for gr in (grid, fine):
        k = build_kernels(env, gr.dt, gr.n_steps, frame)
        sols.append(solve_greens(k, gr, omega_c, drive))
    a, b = sols
    change = {
        "u": float(np.abs(a.u - b.u[::2]).max()),
        "y": float(np.abs(a.y - b.y[::2]).max()),
        "v": float(np.abs(a.v_diag - b.v_diag[::2]).max()),
    }
    if tol is not None:
        bad = {k: c for k, c in change.items() if c > tol}
        if bad:
            raise ConvergenceError(f"step-halving changes exceed {tol}: {bad}")
    return change
