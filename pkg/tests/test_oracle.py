import numpy as np
import pytest

from cavitherm.errors import ValidationError
from cavitherm.greens import TimeGrid, solve_greens
from cavitherm.oracle import (DiscreteBath, compare, default_window, discretize, propagate_u,
                              propagate_v, sum_rule_error, unitarity_drift)
from cavitherm.spectral import (bose_occupation, build_kernels, build_qgaussian,
                                make_environment, thermal_scale)

from conftest import KAPPA, OMEGA_C, STRONG, WEAK, WIDTH


def env_for(Omega, kappa=0.0, T0=0.1, d=WIDTH):
    return make_environment(build_qgaussian(Omega, OMEGA_C, 1.39, d), kappa, T0)


def test_no_modes_gives_free_cavity():
    bath = DiscreteBath(np.zeros(0), np.zeros(0), 0.1)
    grid = TimeGrid.from_horizon(10, 0.5)
    u = propagate_u(bath, OMEGA_C, grid)
    assert np.allclose(u, 1.0)  # rotating frame of e^{-i w_c t}
    assert not propagate_v(bath, OMEGA_C, grid).any()


def test_single_resonant_mode_rabi():
    g = 0.04
    bath = DiscreteBath(np.array([OMEGA_C]), np.array([g]), 0.1)
    grid = TimeGrid.from_horizon(100, 0.5)
    t = grid.times
    assert np.allclose(propagate_u(bath, OMEGA_C, grid), np.cos(g * t), atol=1e-12)
    nbar = bose_occupation(OMEGA_C, thermal_scale(0.1))
    assert np.allclose(propagate_v(bath, OMEGA_C, grid), nbar * np.sin(g * t) ** 2, atol=1e-12)


def test_single_bin_carries_total_weight():
    env = env_for(STRONG, d=WIDTH / 100)
    bath = discretize(env, 1, window=(OMEGA_C - 0.5, OMEGA_C + 0.5), weights="bin_mass")
    assert bath.total_weight == pytest.approx(STRONG**2, rel=1e-4)


@pytest.mark.parametrize("weights", ["sample", "bin_mass"])
def test_sum_rule_over_ten_widths(weights):
    env = env_for(STRONG)
    bath = discretize(env, 64, (OMEGA_C - 10 * WIDTH, OMEGA_C + 10 * WIDTH), weights)
    assert sum_rule_error(env, bath) < 1e-3
    assert np.all(np.diff(bath.omega) > 0)


def test_uncoupled_bath_has_zero_couplings():
    bath = discretize(env_for(0.0), 16)
    assert not bath.g.any()


def test_narrow_window_rejected():
    with pytest.raises(ValidationError, match="covers"):
        discretize(env_for(STRONG), 64, (OMEGA_C - 2 * WIDTH, OMEGA_C + 2 * WIDTH))


def test_default_window_grows_with_modes():
    spin = env_for(STRONG).spin
    lo64, hi64 = default_window(spin, 64)
    lo256, hi256 = default_window(spin, 256)
    assert hi64 - lo64 == pytest.approx(10 * WIDTH)
    assert hi256 - lo256 == pytest.approx(20 * WIDTH)


def test_unitarity():
    bath = discretize(env_for(STRONG), 64)
    assert unitarity_drift(bath, OMEGA_C, np.linspace(0, 600, 97)) < 1e-9


def test_leakage_comb_adds_flat_weight():
    env = env_for(STRONG, kappa=KAPPA)
    plain = discretize(env, 32)
    comb = discretize(env, 32, include_leakage=True, leakage_modes=8)
    assert comb.n_modes == 48
    extra = comb.total_weight - plain.total_weight
    assert extra == pytest.approx(2 * KAPPA * plain.spacing * 48 / (2 * np.pi), rel=1e-12)


def test_weak_coupling_matches_solver():
    env = env_for(WEAK)
    grid = TimeGrid.from_horizon(200, 0.05)
    sol = solve_greens(build_kernels(env, grid.dt, grid.n_steps, OMEGA_C), grid, OMEGA_C)
    rep = compare(env, sol, 64)
    assert rep.u_deviation < 1e-4
    assert rep.v_deviation < 5e-3


def test_comparison_stops_at_half_recurrence():
    env = env_for(STRONG)
    grid = TimeGrid.from_horizon(400, 0.25)
    sol = solve_greens(build_kernels(env, grid.dt, grid.n_steps, OMEGA_C), grid, OMEGA_C)
    rep = compare(env, sol, 32)
    assert rep.compared_until < 0.5 * rep.recurrence_time
    assert rep.times[-1] == rep.compared_until


def test_bin_mass_weights_converge_quadratically_in_modes():
    env = env_for(STRONG)
    grid = TimeGrid.from_horizon(200, 0.1)
    sol = solve_greens(build_kernels(env, grid.dt, grid.n_steps, OMEGA_C), grid, OMEGA_C)
    win = (OMEGA_C - 5 * WIDTH, OMEGA_C + 5 * WIDTH)
    d64 = compare(env, sol, 64, win, "bin_mass").u_deviation
    d128 = compare(env, sol, 128, win, "bin_mass").u_deviation
    assert 3.5 < d64 / d128 < 4.5
