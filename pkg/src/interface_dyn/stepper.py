"""Classical RK4 time stepping with structure-preserving post-steps and guards.

Post-step, in this order: (1) Krasny filter on the curve samples and the
strength (threshold taken from Params), (2) re-projection of the strength
mean onto its pre-step value, so circulation cannot drift.

Guards during a run, in this order per step: finite-value check, solver
convergence (raised from inside the stage evaluations), arc-chord bound, and
the Rayleigh-Taylor sign condition (checked at diagnostic steps, where sigma
is already being assembled).  A violated guard ends the run with a typed
outcome instead of an exception.

Adaptive stepping: the step is rejected (StepRejected) when dt exceeds

    cfl_safety * min( h / max|z_t|,  1/sqrt(g n/2),  h^2 / (2 eps max|dz|) ),

i.e. transport, gravity-wave and dissipation stability limits; the run loop
retries with the suggested step.
"""
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .diagnostics import assemble_record, sigma_from_derivative
from .dynamics import Params, SimState, StateDerivative, state_derivative
from .errors import CurveDegenerate, NoConvergence, StepRejected
from .geometry import Contour, arc_chord, krasny_filter

COMPLETED = "completed"
ARC_CHORD_BLOWUP = "arc_chord_blowup"
RAYLEIGH_TAYLOR_LOST = "rayleigh_taylor_lost"
SOLVER_FAILURE = "solver_failure"
NUMERICAL_BLOWUP = "numerical_blowup"


@dataclass(frozen=True)
class StepConfig:
    dt: float
    t_end: float
    output_stride: int = 10
    adaptive: bool = False
    cfl_safety: float = 0.5
    abort_arc_chord: float = 1e3


@dataclass(frozen=True)
class RunSinks:
    diag: Callable | None = None
    snapshot: Callable | None = None  # (index, state, deriv, sigma)
    probe: Callable | None = None  # (state)
    snapshot_stride: int = 0


@dataclass(frozen=True)
class RunOutcome:
    kind: str
    t: float
    message: str
    final_state: SimState | None
    steps: int


def _advance(state: SimState, tau: float, deriv: StateDerivative) -> SimState:
    return SimState(
        state.t + tau,
        Contour(state.z.kind, state.z.samples + tau * deriv.z_t),
        state.omega + tau * deriv.omega_t,
    )


def _cfl_limit(state: SimState, deriv: StateDerivative, params: Params, cfg: StepConfig) -> float:
    h = state.z.grid.h
    bounds = []
    vmax = float(np.max(np.hypot(deriv.z_t[:, 0], deriv.z_t[:, 1])))
    if vmax > 0.0:
        bounds.append(h / vmax)
    if params.g > 0.0:
        bounds.append(1.0 / np.sqrt(params.g * state.z.grid.n / 2.0))
    if params.epsilon > 0.0:
        dz = state.z.derivative()
        smax = float(np.max(np.hypot(dz[:, 0], dz[:, 1])))
        bounds.append(h * h / (2.0 * params.epsilon * smax))
    return cfg.cfl_safety * min(bounds) if bounds else float("inf")


def rk4_step(state: SimState, dt: float, params: Params,
             step_cfg: StepConfig | None = None) -> SimState:
    """One RK4 step; raises StepRejected when adaptive and dt is over the CFL."""
    k1 = state_derivative(state, params)
    if step_cfg is not None and step_cfg.adaptive:
        limit = _cfl_limit(state, k1, params, step_cfg)
        if dt > limit:
            raise StepRejected(limit)
    k2 = state_derivative(_advance(state, 0.5 * dt, k1), params)
    k3 = state_derivative(_advance(state, 0.5 * dt, k2), params)
    k4 = state_derivative(_advance(state, dt, k3), params)

    w = dt / 6.0
    samples = state.z.samples + w * (k1.z_t + 2.0 * k2.z_t + 2.0 * k3.z_t + k4.z_t)
    omega = state.omega + w * (k1.omega_t + 2.0 * k2.omega_t + 2.0 * k3.omega_t + k4.omega_t)

    if params.filter_threshold > 0.0:
        samples = krasny_filter(samples, params.filter_threshold)
        omega = krasny_filter(omega[:, None], params.filter_threshold)[:, 0]
    # restore the pre-step mean bit-exactly; a uniform shift cannot resolve a
    # summation tie (it moves the sum by whole sum-ulps, so the computed mean
    # can oscillate one ulp around the target forever), so any residual is
    # then pinned on a single node -- an exact few-quanta nudge ~ n*ulp(mean)
    target = float(np.mean(state.omega))
    c = float(np.mean(omega)) - target
    if c != 0.0:
        omega = omega - c
        for _ in range(4):
            c = float(np.mean(omega)) - target
            if c == 0.0:
                break
            omega[0] -= c * omega.size
    return SimState(state.t + dt, Contour(state.z.kind, samples), omega)


def _finite(state: SimState) -> bool:
    return bool(np.all(np.isfinite(state.z.samples)) and np.all(np.isfinite(state.omega)))


def run(state: SimState, params: Params, cfg: StepConfig,
        sinks: RunSinks | None = None) -> RunOutcome:
    """Advance to t_end, emitting diagnostics; halts early on a violated guard."""
    sinks = sinks or RunSinks()
    stride = max(1, cfg.output_stride)
    t_tol = 1e-12 * max(1.0, abs(cfg.t_end))
    steps = 0
    snap_index = 0
    dt = cfg.dt

    def inspect(current: SimState, final: bool) -> RunOutcome | None:
        nonlocal snap_index
        if not _finite(current):
            return RunOutcome(NUMERICAL_BLOWUP, current.t, "non-finite state", current, steps)
        try:
            ac = arc_chord(current.z)
        except CurveDegenerate as exc:
            return RunOutcome(ARC_CHORD_BLOWUP, current.t, str(exc), current, steps)
        if ac > cfg.abort_arc_chord:
            return RunOutcome(
                ARC_CHORD_BLOWUP, current.t,
                f"arc-chord {ac:.3e} exceeds {cfg.abort_arc_chord:.3e}", current, steps)
        record_due = steps % stride == 0 or final
        snap_due = (sinks.snapshot is not None and sinks.snapshot_stride > 0
                    and (steps % sinks.snapshot_stride == 0 or final))
        if not (record_due or snap_due):
            return None
        try:
            deriv = state_derivative(current, params)
        except NoConvergence as exc:
            return RunOutcome(
                SOLVER_FAILURE, current.t,
                f"strength solve stalled at residual {exc.residual:.3e}", current, steps)
        sigma = sigma_from_derivative(current, deriv, params)
        if record_due and sinks.diag is not None:
            sinks.diag(assemble_record(current, deriv, params, sigma=sigma))
        if snap_due:
            sinks.snapshot(snap_index, current, deriv, sigma)
            snap_index += 1
        if float(sigma.min()) <= 0.0:
            return RunOutcome(
                RAYLEIGH_TAYLOR_LOST, current.t,
                f"sign condition lost: min sigma = {float(sigma.min()):.3e}", current, steps)
        return None

    halted = inspect(state, final=cfg.t_end <= t_tol)
    if halted is not None:
        return halted

    while state.t < cfg.t_end - t_tol:
        dt_step = min(dt, cfg.t_end - state.t)
        try:
            new_state = rk4_step(state, dt_step, params, step_cfg=cfg)
        except StepRejected as exc:
            dt = exc.suggested_dt
            continue
        except NoConvergence as exc:
            return RunOutcome(
                SOLVER_FAILURE, state.t,
                f"strength solve stalled at residual {exc.residual:.3e}", state, steps)
        except CurveDegenerate as exc:
            return RunOutcome(ARC_CHORD_BLOWUP, state.t, str(exc), state, steps)
        state = new_state
        steps += 1
        if sinks.probe is not None:
            sinks.probe(state)
        halted = inspect(state, final=state.t >= cfg.t_end - t_tol)
        if halted is not None:
            return halted

    return RunOutcome(COMPLETED, state.t, "", state, steps)
