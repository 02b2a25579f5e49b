"""Command-line front end.

    interface-dyn run <config> --out <dir>     evolve a configured scenario
    interface-dyn dispersion --k K [...]       measure a standing-wave frequency
    interface-dyn operators [--n N]            quick operator self-checks
    interface-dyn scenario-dump NAME [...]     print an initial state as CSV

Exit codes: 0 success, 2 run halted by a guard, 1 usage/config/environment
error.  Results go to stdout as `key = value`-style lines; errors to stderr.

INTERFACE_DYN_THREADS caps the BLAS thread pools (the quadrature kernels
themselves are single-threaded); INTERFACE_DYN_BACKEND=py|c picks the kernel
implementation at import time.
"""
import argparse
import os
import sys

import numpy as np

from . import _backend
from .diagnostics import sigma_from_derivative
from .dynamics import Params, state_derivative
from .errors import ConfigError, InterfaceDynError
from .geometry import Contour, GeometryKind, Grid
from .scenarios_io import (
    SNAPSHOT_HEADER,
    load_config,
    make_scenario,
    write_diag,
    write_snapshot,
)
from .singular_ops import apply_T, birkhoff_rott, solve_second_kind
from .stepper import COMPLETED, RunSinks, StepConfig, run


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _emit(**pairs) -> None:
    for key, value in pairs.items():
        if isinstance(value, float):
            value = f"{value:.17g}"
        print(f"{key}={value}")


def _apply_thread_cap() -> int | None:
    """Parse INTERFACE_DYN_THREADS and cap the BLAS pools; None on error."""
    raw = os.environ.get("INTERFACE_DYN_THREADS", "").strip()
    if not raw:
        return 0
    try:
        threads = int(raw)
        if threads < 1:
            raise ValueError
    except ValueError:
        return None
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(limits=threads)
    except ImportError:
        pass  # kernels are sequential; the cap only matters for BLAS matvecs
    return threads


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_run(args) -> int:
    from pathlib import Path

    try:
        cfg = load_config(args.config)
    except OSError as exc:
        return _fail(f"cannot read config: {exc}")
    except ConfigError as exc:
        return _fail(str(exc))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        state = make_scenario(cfg.scenario, cfg.n, **cfg.scenario_kwargs())
        params = cfg.to_params()
    except (InterfaceDynError, ValueError) as exc:
        return _fail(str(exc))

    records: list = []
    sinks = RunSinks(
        diag=records.append,
        snapshot=lambda index, st, deriv, sigma: write_snapshot(
            out_dir, index, st, deriv.phi, sigma, deriv.c),
        snapshot_stride=cfg.snapshot_stride,
    )
    outcome = run(state, params, cfg.to_step_config(), sinks)
    write_diag(out_dir / "diag.csv", records)
    _emit(outcome=outcome.kind, t_final=outcome.t, steps=outcome.steps,
          backend=_backend.BACKEND, out_dir=out_dir)
    if outcome.message:
        _emit(message=outcome.message)
    return 0 if outcome.kind == COMPLETED else 2


def run_dispersion(k: int, g: float, n: int, t_end: float,
                   amplitude: float = 1e-5) -> dict:
    """Measure the standing-wave frequency of height mode k against sqrt(g k)."""
    expected = float(np.sqrt(g * k))
    dt = 0.5 / np.sqrt(g * n / 2.0)  # gravity-wave CFL at half safety
    state = make_scenario("flat_cosine", n, amplitude=amplitude, mode=k)
    times = [0.0]
    coefs = [_height_mode(state, k)]

    def probe(st) -> None:
        times.append(st.t)
        coefs.append(_height_mode(st, k))

    outcome = run(state, Params(g=g), StepConfig(dt=dt, t_end=t_end, output_stride=10 ** 9),
                  RunSinks(probe=probe))
    if outcome.kind != COMPLETED:
        raise InterfaceDynError(f"dispersion run halted: {outcome.kind}")

    crossings = []
    for i in range(len(coefs) - 1):
        a, b = coefs[i], coefs[i + 1]
        if a == 0.0 or a * b < 0.0:
            crossings.append(times[i] + (times[i + 1] - times[i]) * a / (a - b))
    if len(crossings) < 2:
        raise InterfaceDynError("dispersion run too short: fewer than two zero crossings")
    measured = float(np.pi / np.mean(np.diff(crossings)))
    return {
        "expected_omega": expected,
        "measured_omega": measured,
        "rel_error": abs(measured - expected) / expected,
        "crossings": len(crossings),
        "dt": dt,
        "steps": outcome.steps,
    }


def _height_mode(state, k: int) -> float:
    y = state.z.positions()[:, 1]
    return float(2.0 * np.real(np.fft.fft(y)[k]) / y.shape[0])


def _cmd_dispersion(args) -> int:
    if args.k < 1 or args.k >= args.n // 2:
        return _fail(f"mode k must lie in [1, n/2), got k={args.k} with n={args.n}")
    if args.g <= 0.0:
        return _fail(f"dispersion needs g > 0, got {args.g}")
    try:
        result = run_dispersion(k=args.k, g=args.g, n=args.n, t_end=args.t_end)
    except InterfaceDynError as exc:
        return _fail(str(exc))
    _emit(**result)
    return 0


def _cmd_operators(args) -> int:
    n = args.n
    a = Grid(n).nodes
    circle = Contour(GeometryKind.CLOSED, np.stack([np.cos(a), np.sin(a)], axis=1))
    flat = Contour(GeometryKind.PERIODIC, np.zeros((n, 2)))

    br_err = float(np.max(np.abs(
        birkhoff_rott(circle, np.ones(n)) - 0.5 * np.stack([-np.sin(a), np.cos(a)], axis=1))))
    t_const_err = float(np.max(np.abs(apply_T(circle, np.full(n, 1.0)) - 1.0)))
    t_flat_err = float(np.max(np.abs(apply_T(flat, np.cos(a) + 0.5))))
    b = 1.0 + np.cos(a)
    res = solve_second_kind(circle, 1.0, b)
    solve_rel = res.residual / float(np.max(np.abs(b)))

    all_pass = (br_err < 1e-10 and t_const_err < 1e-10
                and t_flat_err < 1e-12 and solve_rel <= 1e-12)
    _emit(br_circle_error=br_err, t_const_error=t_const_err, t_flat_error=t_flat_err,
          solve_residual=solve_rel, solve_iters=res.iterations,
          backend=_backend.BACKEND, all_pass="true" if all_pass else "false")
    return 0


def _cmd_scenario_dump(args) -> int:
    kwargs = {
        "flat_cosine": {"amplitude": args.amplitude, "mode": args.mode,
                        "omega_amplitude": args.omega_amplitude, "omega_mode": args.omega_mode},
        "circle_patch": {"radius": args.radius, "omega0": args.omega0},
        "perturbed_circle": {"radius": args.radius, "amplitude": args.amplitude,
                             "mode": args.mode},
    }.get(args.name, {})
    try:
        state = make_scenario(args.name, args.n, **kwargs)
        deriv = state_derivative(state, Params(g=args.g))
        sigma = sigma_from_derivative(state, deriv, Params(g=args.g))
    except (InterfaceDynError, ValueError) as exc:
        return _fail(str(exc))
    nodes = state.z.grid.nodes
    pos = state.z.positions()
    print(SNAPSHOT_HEADER)
    for j in range(args.n):
        print(",".join(f"{v:.17g}" for v in (
            nodes[j], pos[j, 0], pos[j, 1], state.omega[j],
            deriv.phi[j], sigma[j], deriv.c[j])))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interface-dyn",
                                     description="spectral free-interface evolution")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evolve a configured scenario")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_disp = sub.add_parser("dispersion", help="standing-wave frequency check")
    p_disp.add_argument("--k", type=int, required=True, help="height mode to track")
    p_disp.add_argument("--g", type=float, default=1.0)
    p_disp.add_argument("--n", type=int, default=128)
    p_disp.add_argument("--t-end", type=float, default=20.0, dest="t_end")
    p_disp.set_defaults(func=_cmd_dispersion)

    p_ops = sub.add_parser("operators", help="operator oracle self-checks")
    p_ops.add_argument("--n", type=int, default=64)
    p_ops.set_defaults(func=_cmd_operators)

    p_dump = sub.add_parser("scenario-dump", help="print an initial state as CSV")
    p_dump.add_argument("name")
    p_dump.add_argument("--n", type=int, default=128)
    p_dump.add_argument("--amplitude", type=float, default=0.0)
    p_dump.add_argument("--mode", type=int, default=1)
    p_dump.add_argument("--omega-amplitude", type=float, default=0.0, dest="omega_amplitude")
    p_dump.add_argument("--omega-mode", type=int, default=1, dest="omega_mode")
    p_dump.add_argument("--radius", type=float, default=1.0)
    p_dump.add_argument("--omega0", type=float, default=1.0)
    p_dump.add_argument("--g", type=float, default=1.0)
    p_dump.set_defaults(func=_cmd_scenario_dump)
    return parser


def main(argv=None) -> int:
    if _apply_thread_cap() is None:
        return _fail("INTERFACE_DYN_THREADS must be a positive integer")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    return args.func(args)


def console_main() -> None:
    raise SystemExit(main())
