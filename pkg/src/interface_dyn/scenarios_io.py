"""Initial states, arclength reparametrization, run configs and CSV output.

Scenarios (all built at t = 0, nodes uniform in the final parameter):
    flat_rest          quiescent flat interface, w = 0
    flat_cosine        y = amplitude cos(mode x), arclength-reparametrized,
                       optional strength seed w = omega_amplitude cos(omega_mode a)
    circle_patch       circle of given radius with constant strength omega0
    perturbed_circle   r(theta) = radius (1 + amplitude cos(mode theta)), w = 0

Config files are flat `key = value` text with # comments; unknown keys are
rejected and every parsed config round-trips through serialize_config.
"""
import dataclasses
import typing
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .dynamics import Params, SimState
from .errors import ConfigError, SelfIntersecting, UnknownScenario
from .geometry import (
    Contour,
    GeometryKind,
    Grid,
    arc_chord,
    spectral_antiderivative,
    trig_interp,
)
from .stepper import StepConfig

SCENARIO_NAMES = ("flat_rest", "flat_cosine", "circle_patch", "perturbed_circle")

DIAG_HEADER = ("t,A,B,min_sigma,arc_chord,energy,e_rt,mean_omega,"
               "max_speed,uniformity,solver_residual,solver_iters")
SNAPSHOT_HEADER = "alpha,x,y,omega,phi,sigma,c"


# ---------------------------------------------------------------------------
# arclength reparametrization
# ---------------------------------------------------------------------------

def reparametrize_to_arclength(z: Contour, tol: float = 1e-14, max_iter: int = 50) -> Contour:
    """Resample z so |dz/da| is uniform, keeping the left endpoint anchored.

    The new nodes a*(g_j) solve s(a*) = (g_j + pi) L / 2pi by Newton, started
    from a monotone (PCHIP) inverse of the sampled arclength.
    """
    grid = z.grid
    nodes = grid.nodes
    dz = z.derivative()
    speed = np.hypot(dz[:, 0], dz[:, 1])
    mean_speed = float(speed.mean())  # = L / 2pi
    p = spectral_antiderivative(speed - mean_speed)
    p0 = p[0]
    s_nodes = mean_speed * (nodes + np.pi) + p - p0
    targets = mean_speed * (nodes + np.pi)

    inverse = PchipInterpolator(
        np.concatenate([s_nodes, [mean_speed * 2.0 * np.pi]]),
        np.concatenate([nodes, [np.pi]]),
    )
    alpha = inverse(targets)
    scale = max(1.0, mean_speed * 2.0 * np.pi)
    for _ in range(max_iter):
        f = mean_speed * (alpha + np.pi) + trig_interp(p, alpha) - p0 - targets
        if float(np.max(np.abs(f))) < tol * scale:
            break
        alpha = alpha - f / trig_interp(speed, alpha)

    alpha[0] = nodes[0]  # s(-pi) = 0 by construction; pin against rounding
    samples = trig_interp(z.samples, alpha)
    if z.kind is GeometryKind.PERIODIC:
        # resampled deviation in the new parameter: x(a*) - g = a* - g + p1(a*)
        samples[:, 0] += alpha - nodes
    return Contour(z.kind, samples)


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _check_embedded(z: Contour) -> Contour:
    if arc_chord(z) > 1e3:
        raise SelfIntersecting("curve is within arc-chord 1e3 of self-intersection")
    return z


def _flat_rest(n: int) -> SimState:
    return SimState(0.0, Contour(GeometryKind.PERIODIC, np.zeros((n, 2))), np.zeros(n))


def _flat_cosine(n: int, amplitude: float, mode: int,
                 omega_amplitude: float = 0.0, omega_mode: int = 1) -> SimState:
    _require(amplitude >= 0.0, f"amplitude must be non-negative, got {amplitude}")
    _require(1 <= mode < n // 2, f"mode must lie in [1, n/2), got {mode}")
    _require(omega_amplitude >= 0.0,
             f"omega_amplitude must be non-negative, got {omega_amplitude}")
    if omega_amplitude > 0.0:
        _require(1 <= omega_mode < n // 2, f"omega_mode must lie in [1, n/2), got {omega_mode}")
    nodes = Grid(n).nodes
    curve = Contour(GeometryKind.PERIODIC,
                    np.stack([np.zeros(n), amplitude * np.cos(mode * nodes)], axis=1))
    if amplitude > 0.0:
        curve = _check_embedded(reparametrize_to_arclength(curve))
    omega = omega_amplitude * np.cos(omega_mode * nodes) if omega_amplitude > 0.0 else np.zeros(n)
    return SimState(0.0, curve, omega)


def _circle_patch(n: int, radius: float, omega0: float) -> SimState:
    _require(radius > 0.0, f"radius must be positive, got {radius}")
    nodes = Grid(n).nodes
    samples = radius * np.stack([np.cos(nodes), np.sin(nodes)], axis=1)
    return SimState(0.0, Contour(GeometryKind.CLOSED, samples), np.full(n, float(omega0)))


def _perturbed_circle(n: int, radius: float, amplitude: float, mode: int) -> SimState:
    _require(radius > 0.0, f"radius must be positive, got {radius}")
    _require(amplitude >= 0.0, f"amplitude must be non-negative, got {amplitude}")
    _require(1 <= mode < n // 2, f"mode must lie in [1, n/2), got {mode}")
    nodes = Grid(n).nodes
    r = radius * (1.0 + amplitude * np.cos(mode * nodes))
    if float(r.min()) <= 0.0:
        raise SelfIntersecting(f"radial profile reaches {float(r.min()):.3e} <= 0")
    samples = np.stack([r * np.cos(nodes), r * np.sin(nodes)], axis=1)
    curve = _check_embedded(reparametrize_to_arclength(Contour(GeometryKind.CLOSED, samples)))
    return SimState(0.0, curve, np.zeros(n))


_BUILDERS = {
    "flat_rest": _flat_rest,
    "flat_cosine": _flat_cosine,
    "circle_patch": _circle_patch,
    "perturbed_circle": _perturbed_circle,
}


def make_scenario(name: str, n: int, **kwargs) -> SimState:
    builder = _BUILDERS.get(name)
    if builder is None:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {SCENARIO_NAMES}")
    try:
        return builder(n, **kwargs)
    except TypeError as exc:
        raise ConfigError(f"scenario {name!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    scenario: str = ""
    n: int = 128
    amplitude: float = 0.0
    mode: int = 1
    omega_amplitude: float = 0.0
    omega_mode: int = 1
    radius: float = 1.0
    omega0: float = 1.0
    g: float = 1.0
    a_rho: float = 1.0
    rho2: float = 1.0
    epsilon: float = 0.0
    dt: float = 1e-3
    t_end: float = 1.0
    output_stride: int = 10
    snapshot_stride: int = 0
    adaptive: bool = False
    cfl_safety: float = 0.5
    abort_arc_chord: float = 1e3
    filter_threshold: float = 0.0
    solver_tol: float = 1e-12
    solver_max_iter: int = 200
    allow_kelvin_helmholtz: bool = False
    seed: int = 0  # reserved for randomized scenarios; accepted, currently unused

    def scenario_kwargs(self) -> dict:
        if self.scenario == "flat_cosine":
            return {"amplitude": self.amplitude, "mode": self.mode,
                    "omega_amplitude": self.omega_amplitude, "omega_mode": self.omega_mode}
        if self.scenario == "circle_patch":
            return {"radius": self.radius, "omega0": self.omega0}
        if self.scenario == "perturbed_circle":
            return {"radius": self.radius, "amplitude": self.amplitude, "mode": self.mode}
        return {}

    def to_params(self) -> Params:
        return Params(a_rho=self.a_rho, g=self.g, rho2=self.rho2, epsilon=self.epsilon,
                      solver_tol=self.solver_tol, solver_max_iter=self.solver_max_iter,
                      filter_threshold=self.filter_threshold,
                      allow_kelvin_helmholtz=self.allow_kelvin_helmholtz)

    def to_step_config(self) -> StepConfig:
        return StepConfig(dt=self.dt, t_end=self.t_end, output_stride=self.output_stride,
                          adaptive=self.adaptive, cfl_safety=self.cfl_safety,
                          abort_arc_chord=self.abort_arc_chord)


_FIELD_TYPES = typing.get_type_hints(RunConfig)


def _convert(key: str, text: str, lineno: int):
    target = _FIELD_TYPES[key]
    try:
        if target is bool:
            if text.lower() in ("true", "false"):
                return text.lower() == "true"
            raise ValueError(f"expected true/false, got {text!r}")
        return target(text)
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, value, lineno)
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if not cfg.scenario:
        raise ConfigError("scenario is required")
    if cfg.scenario not in SCENARIO_NAMES:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}; choose from {SCENARIO_NAMES}")
    if cfg.n < 16 or cfg.n & (cfg.n - 1) != 0:
        raise ConfigError(f"n must be a power of two >= 16, got {cfg.n}")
    for key in ("dt", "t_end", "cfl_safety", "abort_arc_chord"):
        if getattr(cfg, key) <= 0.0:
            raise ConfigError(f"{key} must be positive, got {getattr(cfg, key)}")
    if cfg.output_stride < 1:
        raise ConfigError(f"output_stride must be >= 1, got {cfg.output_stride}")
    if cfg.snapshot_stride < 0:
        raise ConfigError(f"snapshot_stride must be >= 0, got {cfg.snapshot_stride}")
    try:
        cfg.to_params()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(cfg: RunConfig) -> str:
    def fmt(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        return repr(value) if isinstance(value, float) else str(value)

    lines = [f"{f.name} = {fmt(getattr(cfg, f.name))}" for f in dataclasses.fields(cfg)]
    return "\n".join(lines) + "\n"


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_diag(path, records) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(DIAG_HEADER + "\n")
        for r in records:
            fh.write(",".join([
                _fmt(r.t), _fmt(r.A), _fmt(r.B), _fmt(r.min_sigma), _fmt(r.arc_chord),
                _fmt(r.energy), _fmt(r.e_rt), _fmt(r.mean_omega), _fmt(r.max_speed),
                _fmt(r.uniformity), _fmt(r.solver_residual), str(r.solver_iters),
            ]) + "\n")
    return path


def snapshot_path(out_dir, index: int) -> Path:
    return Path(out_dir) / f"snap_{index:06d}.csv"


def write_snapshot(out_dir, index: int, state: SimState,
                   phi: np.ndarray, sigma: np.ndarray, c: np.ndarray) -> Path:
    path = snapshot_path(out_dir, index)
    nodes = state.z.grid.nodes
    pos = state.z.positions()
    with path.open("w") as fh:
        fh.write(SNAPSHOT_HEADER + "\n")
        for j in range(state.z.grid.n):
            fh.write(",".join([
                _fmt(nodes[j]), _fmt(pos[j, 0]), _fmt(pos[j, 1]),
                _fmt(state.omega[j]), _fmt(phi[j]), _fmt(sigma[j]), _fmt(c[j]),
            ]) + "\n")
    return path
