"""Integrating-factor mild-solution stepper."""

import math

import numpy as np
import pytest

from fowlerlab.kernel import apply_semigroup
from fowlerlab.nonlocal_op import Field, SpatialGrid
from fowlerlab.solver_fd import DivergenceError, InitialDatum, SimConfig
from fowlerlab.solver_spectral import duhamel_step, run_mild
from fowlerlab.symbolkit import SymbolParams, spectral_profile

P = SymbolParams()
GRID = SpatialGrid.centered(256, 100.0)
BUMP = InitialDatum.bump(0.0, 2.5, 0.1)


def test_periodic_only():
    v = Field(SpatialGrid(64, 0.5, origin=0.0), np.zeros(64), "far_field", 0.0)
    with pytest.raises(ValueError):
        duhamel_step(v, 0.01, P)


def test_dt_budget_warning():
    v = Field(GRID, np.zeros(GRID.n_points))
    with pytest.warns(UserWarning, match="accuracy budget"):
        duhamel_step(v, 0.02, P)


def test_flux_off_is_exactly_the_semigroup():
    rng = np.random.default_rng(5)
    v = Field(GRID, 0.01 * rng.standard_normal(GRID.n_points))
    a = duhamel_step(v, 0.005, P, include_flux=False)
    b = apply_semigroup(0.005, v, P)
    assert np.max(np.abs(a.values - b.values)) <= 1e-13


def test_one_step_of_run_matches_duhamel_step():
    cfg = SimConfig(GRID, 0.01, 0.01, BUMP, P, "spectral")
    traj = run_mild(cfg)
    v0 = BUMP.realize_perturbation(GRID, P)
    manual = duhamel_step(v0, 0.01, P)
    assert np.max(np.abs(traj.snapshots[-1].values - manual.values)) <= 1e-14


def test_mean_is_conserved():
    cfg = SimConfig(GRID, 0.01, 2.0, BUMP, P, "spectral", snapshot_every=100)
    traj = run_mild(cfg)
    means = [float(np.mean(s.values)) for s in traj.snapshots]
    assert abs(means[-1] - means[0]) <= 1e-15


def test_growth_envelope_never_exceeded():
    alpha = spectral_profile(P).alpha
    cfg = SimConfig(GRID, 0.01, 3.0, BUMP, P, "spectral")
    traj = run_mild(cfg)
    ratios = traj.l2_series / (traj.l2_series[0] * np.exp(alpha * traj.times))
    assert float(np.max(ratios)) <= 1.0 + 1e-12


def test_linear_track_is_the_semigroup_norm():
    cfg = SimConfig(GRID, 0.01, 0.5, BUMP, P, "spectral")
    traj = run_mild(cfg)
    v0 = BUMP.realize_perturbation(GRID, P)
    want = apply_semigroup(0.5, v0, P).l2_norm()
    assert traj.l2_linear[-1] == pytest.approx(want, rel=1e-12)
    assert traj.deviation[0] == 0.0
    # the nonlinear solution has left the linear one by a finite amount
    assert 0.0 < traj.deviation[-1] < traj.l2_series[-1]


def test_deviation_scales_quadratically():
    # small grid, a wider band so the short domain can host it
    g = SpatialGrid.centered(512, 260.0)
    devs = []
    for a in (0.04, 0.02):
        cfg = SimConfig(g, 0.01, 1.0, InitialDatum.w0_band(0.03, 0.08, a), P, "spectral")
        devs.append(float(run_mild(cfg).deviation[-1]))
    assert devs[0] / devs[1] == pytest.approx(4.0, abs=0.05)  # measured 3.99997


def test_snapshots_carry_the_full_state():
    p = P.with_u_phi(0.3)
    cfg = SimConfig(GRID, 0.01, 0.1, InitialDatum.bump(0.0, 2.5, 0.1), p, "spectral")
    traj = run_mild(cfg)
    # u = u_phi + v, so the field mean sits at u_phi plus the bump mass
    v0 = cfg.initial.realize_perturbation(GRID, p)
    assert float(np.mean(traj.snapshots[0].values)) == pytest.approx(
        0.3 + float(np.mean(v0.values)), rel=1e-12
    )


def test_divergence_partial_trajectory():
    cfg = SimConfig(GRID, 0.01, 50.0, InitialDatum.bump(0.0, 2.5, 2e4), P, "spectral")
    with pytest.raises(DivergenceError) as exc_info:
        run_mild(cfg)
    part = exc_info.value.trajectory
    assert part is not None and part.diverged_at == exc_info.value.step
    assert part.deviation is not None and len(part.deviation) == len(part.times)
    assert np.all(np.isfinite(part.l2_series))


def test_determinism():
    cfg = SimConfig(GRID, 0.01, 1.0, BUMP, P, "spectral")
    a = run_mild(cfg)
    b = run_mild(cfg)
    assert np.array_equal(a.l2_series, b.l2_series)
    assert np.array_equal(a.snapshots[-1].values, b.snapshots[-1].values)
