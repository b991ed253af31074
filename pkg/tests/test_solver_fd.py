"""Explicit finite-difference marcher."""

import math

import numpy as np
import pytest

from fowlerlab.nonlocal_op import Field, SpatialGrid
from fowlerlab.solver_fd import (
    DivergenceError,
    InitialDatum,
    SimConfig,
    fd_step,
    linear_symbol,
    run,
    stable_dt,
)
from fowlerlab.symbolkit import SymbolParams

P = SymbolParams()
GRID = SpatialGrid.centered(256, 100.0)


def test_stable_dt_frozen():
    g = SpatialGrid.centered(2048, 100.0)
    assert stable_dt(g, P) == pytest.approx(0.00027687508134415916, rel=1e-9)
    # diffusion-limited at coarse resolution
    assert stable_dt(SpatialGrid.centered(128, 100.0), P) <= (100.0 / 128.0) ** 2 / 4.0


def test_initial_flat_and_bump():
    v = InitialDatum.flat(0.5).realize_perturbation(GRID, P.with_u_phi(0.5))
    assert np.all(v.values == 0.0)
    bump = InitialDatum.bump(0.0, 2.5, 0.1)
    v = bump.realize_perturbation(GRID, P)
    assert v.values[128] == pytest.approx(0.1, rel=1e-12)  # x=0 on the centered grid
    u = bump.realize_full(GRID, P.with_u_phi(0.3))
    assert np.max(u.values) == pytest.approx(0.4, rel=1e-12)
    with pytest.raises(AssertionError):
        InitialDatum.bump(0.0, GRID.dx, 0.1).realize_perturbation(GRID, P)  # too narrow


def test_initial_w0_band_norm():
    from fowlerlab.symbolkit import spectral_profile

    xi_star = spectral_profile(P).xi_star
    g = SpatialGrid.centered(1024, 520.0)
    v = InitialDatum.w0_band(0.6 * xi_star, xi_star, 0.25).realize_perturbation(g, P)
    assert v.l2_norm() == pytest.approx(0.25, rel=1e-12)


def test_initial_samples_round_trip(tmp_path):
    vals = np.linspace(-1.0, 1.0, GRID.n_points)
    plain = tmp_path / "u.txt"
    np.savetxt(plain, vals)
    v = InitialDatum.samples(plain).realize_perturbation(GRID, P)
    assert np.max(np.abs(v.values - vals)) <= 1e-12
    # CSV variant: last column wins, u_phi subtracted
    csvp = tmp_path / "u.csv"
    np.savetxt(csvp, np.column_stack([GRID.x, vals + 0.2]), delimiter=",")
    v = InitialDatum.samples(csvp).realize_perturbation(GRID, P.with_u_phi(0.2))
    assert np.max(np.abs(v.values - vals)) <= 1e-12
    short = tmp_path / "short.txt"
    np.savetxt(short, vals[:100])
    with pytest.raises(AssertionError):
        InitialDatum.samples(short).realize_perturbation(GRID, P)


def test_simconfig_step_count():
    bump = InitialDatum.bump(0.0, 2.5, 0.1)
    assert SimConfig(GRID, 0.1, 1.0, bump, P).n_steps == 10
    assert SimConfig(GRID, 0.1, 1.04, bump, P).n_steps == 11
    with pytest.raises(AssertionError):
        SimConfig(GRID, 0.1, 0.05, bump, P)
    with pytest.raises(AssertionError):
        SimConfig(GRID, 0.1, 1.0, bump, P, scheme="magic")


def test_flat_state_is_a_fixed_point():
    u = Field(GRID, np.full(GRID.n_points, 0.8), "periodic", 0.8)
    out = fd_step(u, 0.01, P.with_u_phi(0.8))
    assert np.max(np.abs(out.values - 0.8)) <= 1e-13


def test_linear_step_matches_the_symbol():
    # with the flux off, one step is exactly mode-wise 1 - dt*lambda_k
    rng = np.random.default_rng(5)
    u = Field(GRID, 0.01 * rng.standard_normal(GRID.n_points))
    dt = stable_dt(GRID, P)
    stepped = fd_step(u, dt, P, include_flux=False)
    lam = linear_symbol(GRID, P)
    manual = np.fft.irfft((1.0 - dt * lam) * np.fft.rfft(u.values), GRID.n_points)
    assert np.max(np.abs(stepped.values - manual)) <= 1e-14


def test_mass_conservation():
    dt = stable_dt(GRID, P)
    cfg = SimConfig(GRID, dt, 100 * dt, InitialDatum.bump(0.0, 2.5, 0.1), P)
    traj = run(cfg)
    s0 = float(np.sum(traj.snapshots[0].values))
    s1 = float(np.sum(traj.snapshots[-1].values))
    assert abs(s1 - s0) <= 1e-12 * max(1.0, abs(s0))


def test_translation_equivariance_through_the_nonlinear_march():
    dt = stable_dt(GRID, P)
    u = InitialDatum.bump(0.0, 2.5, 0.1).realize_full(GRID, P)
    us = Field(GRID, np.roll(u.values, 85))
    for _ in range(50):
        u = fd_step(u, dt, P)
        us = fd_step(us, dt, P)
    assert np.max(np.abs(us.values - np.roll(u.values, 85))) <= 1e-13


def test_run_records_and_snapshot_schedule():
    cfg = SimConfig(GRID, 0.01, 0.1, InitialDatum.bump(0.0, 2.5, 0.1), P, "fd", snapshot_every=3)
    traj = run(cfg)
    assert len(traj.times) == len(traj.l2_series) == 11
    assert traj.l2_series[0] == pytest.approx(
        cfg.initial.realize_perturbation(GRID, P).l2_norm(), rel=1e-13
    )
    assert traj.snapshot_times == pytest.approx([0.0, 0.03, 0.06, 0.09, 0.1])
    assert traj.diverged_at is None and traj.scheme == "fd"


def test_run_warns_above_the_stability_policy():
    # two oversized steps: enough to trip the warning, not enough to blow up
    cfg = SimConfig(GRID, 1.0, 2.0, InitialDatum.bump(0.0, 2.5, 0.1), P)
    with pytest.warns(UserWarning, match="stability policy"):
        run(cfg)


def test_divergence_carries_the_partial_trajectory():
    cfg = SimConfig(GRID, 0.5, 50.0, InitialDatum.bump(0.0, 2.5, 5.0), P)
    with pytest.warns(UserWarning):
        with pytest.raises(DivergenceError) as exc_info:
            run(cfg)
    exc = exc_info.value
    assert exc.step is not None and exc.step >= 1
    part = exc.trajectory
    assert part.diverged_at == exc.step
    assert len(part.times) == exc.step  # up to the last finite state
    assert np.all(np.isfinite(part.l2_series))
