"""Tests for the RK4 stepper, post-step projections, guards and run scheduling."""
import numpy as np
import pytest

from interface_dyn.dynamics import Params, SimState, state_derivative
from interface_dyn.errors import StepRejected
from interface_dyn.geometry import Contour, GeometryKind, Grid
from interface_dyn.scenarios_io import make_scenario
from interface_dyn.stepper import (
    ARC_CHORD_BLOWUP,
    COMPLETED,
    NUMERICAL_BLOWUP,
    RAYLEIGH_TAYLOR_LOST,
    SOLVER_FAILURE,
    RunSinks,
    StepConfig,
    rk4_step,
    run,
)


def flat_rest(n: int) -> SimState:
    return SimState(0.0, Contour(GeometryKind.PERIODIC, np.zeros((n, 2))), np.zeros(n))


def collecting_sinks(snapshot_stride: int = 0) -> tuple[RunSinks, dict]:
    got: dict = {"records": [], "snapshots": [], "probes": 0}

    def on_probe(state: SimState) -> None:
        got["probes"] += 1

    sinks = RunSinks(
        diag=got["records"].append,
        snapshot=lambda index, state, deriv, sigma: got["snapshots"].append(index),
        probe=on_probe,
        snapshot_stride=snapshot_stride,
    )
    return sinks, got


# ---------------------------------------------------------------------------
# single steps
# ---------------------------------------------------------------------------

def test_flat_rest_is_fixed_point() -> None:
    state = flat_rest(64)
    new = rk4_step(state, 1e-2, Params())
    assert new.t == pytest.approx(1e-2)
    assert np.array_equal(new.z.samples, state.z.samples)
    assert np.array_equal(new.omega, state.omega)


def test_rk4_self_convergence_order() -> None:
    params = Params()
    t_end = 0.4

    def advance(dt: float) -> np.ndarray:
        state = make_scenario("flat_cosine", 64, amplitude=0.05, mode=1)
        while state.t < t_end - 1e-12:
            state = rk4_step(state, dt, params)
        return state.z.samples

    e1 = np.max(np.abs(advance(0.1) - advance(0.05)))
    e2 = np.max(np.abs(advance(0.05) - advance(0.025)))
    assert e1 / e2 >= 12.0


def test_krasny_filter_runs_inside_step() -> None:
    params = Params(filter_threshold=0.5)
    state = make_scenario("flat_cosine", 32, amplitude=0.01, mode=1)
    new = rk4_step(state, 1e-3, params)
    coef = np.fft.fft(new.omega) / 32
    mags = np.abs(coef)
    small = mags < 0.5 * mags.max()
    # zeroed modes reappear only at fft round-trip rounding level
    assert np.all(mags[small] <= 1e-14 * mags.max())
    assert np.any(mags > 0.0)


def test_mean_strength_projection() -> None:
    # constant-strength patch: circulation is restored bit-exactly
    n = 64
    a = Grid(n).nodes
    circle = Contour(GeometryKind.CLOSED, np.stack([np.cos(a), np.sin(a)], axis=1))
    state = SimState(0.0, circle, np.full(n, 2.0))
    params = Params(g=0.0)
    for _ in range(3):
        state = rk4_step(state, 1e-3, params)
    assert float(np.mean(state.omega)) == 2.0

    # zero-circulation wave: the mean stays pinned at zero
    state2 = make_scenario("flat_cosine", 64, amplitude=0.05, mode=1,
                           omega_amplitude=0.1, omega_mode=2)
    for _ in range(5):
        state2 = rk4_step(state2, 1e-3, Params())
    assert abs(float(np.mean(state2.omega))) < 1e-14


# ---------------------------------------------------------------------------
# adaptive step-size control
# ---------------------------------------------------------------------------

def test_step_rejected_when_dt_exceeds_cfl() -> None:
    state = make_scenario("flat_cosine", 64, amplitude=0.1, mode=1)
    params = Params()
    cfg = StepConfig(dt=10.0, t_end=1.0, adaptive=True, cfl_safety=0.5)
    with pytest.raises(StepRejected) as exc:
        rk4_step(state, 10.0, params, step_cfg=cfg)
    # from rest the speed bound is inactive; the gravity-wave bound rules
    expected = 0.5 / np.sqrt(params.g * 32)
    assert exc.value.suggested_dt == pytest.approx(expected, rel=1e-12)


def test_epsilon_tightens_cfl() -> None:
    state = make_scenario("flat_cosine", 64, amplitude=0.1, mode=1)
    params = Params(epsilon=0.1)
    cfg = StepConfig(dt=10.0, t_end=1.0, adaptive=True, cfl_safety=0.5)
    with pytest.raises(StepRejected) as exc:
        rk4_step(state, 10.0, params, step_cfg=cfg)
    h = Grid(64).h
    dz = state.z.derivative()
    smax = float(np.max(np.hypot(dz[:, 0], dz[:, 1])))
    expected = 0.5 * min(1.0 / np.sqrt(32.0), h * h / (2 * 0.1 * smax))
    assert exc.value.suggested_dt == pytest.approx(expected, rel=1e-12)


def test_run_retries_after_rejection() -> None:
    state = make_scenario("flat_cosine", 32, amplitude=0.05, mode=1)
    cfg = StepConfig(dt=5.0, t_end=0.3, adaptive=True)
    outcome = run(state, Params(), cfg)
    assert outcome.kind == COMPLETED
    assert outcome.t == pytest.approx(0.3, abs=1e-12)
    assert outcome.steps >= 3


# ---------------------------------------------------------------------------
# run loop scheduling
# ---------------------------------------------------------------------------

def test_run_emits_records_and_snapshots() -> None:
    state = make_scenario("flat_cosine", 32, amplitude=0.02, mode=1)
    sinks, got = collecting_sinks(snapshot_stride=5)
    cfg = StepConfig(dt=0.01, t_end=0.1, output_stride=5)
    outcome = run(state, Params(), cfg, sinks)
    assert outcome.kind == COMPLETED
    assert outcome.steps == 10
    times = [r.t for r in got["records"]]
    assert times == pytest.approx([0.0, 0.05, 0.1], abs=1e-12)
    assert got["snapshots"] == [0, 1, 2]
    assert got["probes"] == 10
    assert outcome.final_state is not None
    assert outcome.final_state.t == pytest.approx(0.1, abs=1e-12)


def test_run_shortens_final_step() -> None:
    state = make_scenario("flat_cosine", 32, amplitude=0.02, mode=1)
    sinks, got = collecting_sinks()
    cfg = StepConfig(dt=0.01, t_end=0.095, output_stride=5)
    outcome = run(state, Params(), cfg, sinks)
    assert outcome.kind == COMPLETED
    assert outcome.t == pytest.approx(0.095, abs=1e-12)
    assert got["records"][-1].t == pytest.approx(0.095, abs=1e-12)


# ---------------------------------------------------------------------------
# guards
# ---------------------------------------------------------------------------

def test_guard_numerical_blowup() -> None:
    state = flat_rest(32)
    omega = state.omega.copy()
    omega[3] = np.nan
    bad = SimState(0.0, state.z, omega)
    outcome = run(bad, Params(), StepConfig(dt=0.01, t_end=0.1))
    assert outcome.kind == NUMERICAL_BLOWUP
    assert outcome.t == 0.0


def test_guard_arc_chord_initial() -> None:
    n = 64
    a = Grid(n).nodes
    pinched = Contour(GeometryKind.CLOSED,
                      np.stack([np.cos(a), 0.005 * np.sin(a)], axis=1))
    state = SimState(0.0, pinched, np.zeros(n))
    outcome = run(state, Params(), StepConfig(dt=1e-3, t_end=0.1, abort_arc_chord=100.0))
    assert outcome.kind == ARC_CHORD_BLOWUP
    assert outcome.t == 0.0


def test_guard_rayleigh_taylor() -> None:
    state = flat_rest(32)
    outcome = run(state, Params(g=-1.0), StepConfig(dt=1e-3, t_end=0.1))
    assert outcome.kind == RAYLEIGH_TAYLOR_LOST
    assert outcome.t == 0.0


def test_guard_solver_failure() -> None:
    state = make_scenario("flat_cosine", 32, amplitude=0.05, mode=1)
    params = Params(solver_tol=1e-30, solver_max_iter=2)
    outcome = run(state, params, StepConfig(dt=1e-3, t_end=0.1))
    assert outcome.kind == SOLVER_FAILURE
    assert outcome.t == 0.0
