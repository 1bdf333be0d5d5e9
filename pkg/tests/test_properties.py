import numpy as np
from hypothesis import given, settings, strategies as st
from scipy import integrate

from cavitherm.coefficients import compute_coefficients
from cavitherm.greens import DriveProtocol, TimeGrid, solve_greens, solve_u
from cavitherm.oracle import DiscreteBath, unitarity_drift
from cavitherm.scenarios import parse_angular
from cavitherm.spectral import (KernelTable, bose_occupation, build_kernels, build_qgaussian,
                                make_environment, _fmt)
from cavitherm.thermo import closed_cavity_oracle, thermodynamics

from conftest import OMEGA_C, WIDTH

SLOW = settings(max_examples=15, deadline=None)


@given(q=st.floats(1.05, 1.95), d=st.floats(0.01, 0.2))
@settings(max_examples=30, deadline=None)
def test_line_shape_half_width_and_area(q, d):
    s = build_qgaussian(0.01, OMEGA_C, q, d)
    assert np.isclose(s.line_shape(OMEGA_C + d / 2) / s.C, 0.5, rtol=1e-12)
    area = sum(integrate.quad(lambda x: s.line_shape(OMEGA_C + x), a, b, limit=400,
                              epsabs=0)[0] for a, b in ((-np.inf, 0), (0, np.inf)))
    assert np.isclose(area, 1.0, rtol=1e-7)


@given(w=st.floats(0.1, 100), T=st.floats(1e-3, 10), f=st.floats(1.01, 3))
def test_bose_occupation_monotone(w, T, f):
    scale = 130.92 * T
    n = bose_occupation(w, scale)
    assert n >= 0
    assert bose_occupation(w * f, scale) <= n <= bose_occupation(w, scale * f)


@given(delta=st.floats(-1.0, 1.0).filter(lambda x: abs(x) > 1e-3),
       A=st.floats(0.01, 2.0), re=st.floats(-5, 5), im=st.floats(-5, 5))
@SLOW
def test_isolated_pipeline_matches_closed_form(delta, A, re, im):
    z0 = complex(re, im)
    wd = OMEGA_C - delta
    env = make_environment(build_qgaussian(0.0, OMEGA_C, 1.39, WIDTH), 0.0, 0.1)
    grid = TimeGrid.from_horizon(50, 0.25)
    drive = DriveProtocol("tone", A, wd)
    sol = solve_greens(build_kernels(env, 0.25, grid.n_steps, OMEGA_C), grid, OMEGA_C, drive)
    th = thermodynamics(sol, compute_coefficients(sol), z0)
    ref = closed_cavity_oracle(z0, A, OMEGA_C, wd, grid)
    assert np.abs(th.E_r - ref.E).max() < 1e-8 * np.abs(ref.E).max()
    assert np.abs(th.P_w - ref.P_w).max() < 1e-8 * max(np.abs(ref.P_w).max(), 1e-12)


@given(g=st.floats(0.005, 0.08), det=st.floats(-0.1, 0.1))
@SLOW
def test_single_mode_solver_matches_two_level_algebra(g, det):
    grid = TimeGrid.from_horizon(100, 0.05)
    lag = np.arange(grid.n_steps) * grid.dt
    gv = g**2 * np.exp(-1j * det * lag)
    k = KernelTable(grid.dt, grid.n_steps, OMEGA_C, gv, 0 * gv, 0.0)
    u = solve_u(k, grid, OMEGA_C)
    L = np.sqrt(g**2 + det**2 / 4)
    t = grid.times
    ref = np.exp(-0.5j * det * t) * (np.cos(L * t) + 0.5j * det / L * np.sin(L * t))
    # second-order scheme: error ~ (L dt)^2 * L t
    assert np.abs(u - ref).max() < 0.5 * (L * grid.dt) ** 2 * L * t[-1] + 1e-10


@given(Om=st.floats(0.0, 0.06), ratio=st.floats(0.995, 1.005), T0=st.floats(0.0, 0.5),
       kappa=st.floats(0.0, 0.01))
@SLOW
def test_thermal_correlation_nonnegative_and_balance_holds(Om, ratio, T0, kappa):
    spin = build_qgaussian(Om, ratio * OMEGA_C, 1.39, WIDTH)
    env = make_environment(spin, kappa, T0)
    grid = TimeGrid.from_horizon(100, 0.25)
    sol = solve_greens(build_kernels(env, 0.25, grid.n_steps, OMEGA_C), grid, OMEGA_C)
    assert sol.v_diag.min() >= 0
    if T0 == 0:
        assert not sol.v_diag.any()
    # thermodynamics() raises if the heat channels do not sum to the direct total
    th = thermodynamics(sol, compute_coefficients(sol), 3.0)
    if np.abs(th.dE_dt[~th.excluded]).max() > 1e-9:
        assert th.relative_residual() < 5e-3


@given(omega=st.lists(st.floats(10, 20), min_size=1, max_size=12, unique=True),
       seed=st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_discrete_propagator_unitary(omega, seed):
    rng = np.random.default_rng(seed)
    omega = np.sort(np.array(omega))
    bath = DiscreteBath(omega, rng.uniform(0, 0.1, omega.size), 0.1)
    assert unitarity_drift(bath, OMEGA_C, np.linspace(0, 500, 11)) < 1e-9


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_csv_number_format_round_trip(x):
    s = _fmt(x)
    assert len(s.replace("-", "").replace(".", "").split("e")[0]) <= 12
    assert np.isclose(float(s), x, rtol=5e-12, atol=0)


@given(st.floats(-100, 100, allow_nan=False))
def test_pi_multiples(x):
    assert parse_angular(f"{x!r}pi", "f") == x * np.pi
