"""Evolution equations for the interface z(a,t) and sheet strength w(a,t).

The curve moves with z_t = BR(z,w) + c dz/da, where the tangential gauge
speed c keeps |dz/da| uniform in a (c(-pi) = 0).  The strength solves the
second-kind equation

    (I + A T) w_t = RHS(z, w, z_t, c),    T u = 2 BR(z,u) . dz/da,

with A the Atwood-like density ratio.  For the water-wave case A = 1 the
right side collapses to

    RHS = -2 (d/dt BR)|_motion . dz/da - d/da(phi^2) + c A' - 2 g d(z2)/da,

with phi = w/(2|dz|) - c |dz| the upper Bernoulli trace and A' the mean of
2 dz . d(BR)/da; for general A the expanded form with d/da(c w) and the
w^2/(4|dz|^2) flux is used.  A small-scale dissipation switch epsilon >= 0
adds eps * 2 |dz| d^2(phi)/da^2 to the right side before solving.
"""
from dataclasses import dataclass, field

import numpy as np

from .geometry import Contour, spectral_antiderivative, spectral_derivative
from .singular_ops import BRKernelEval, br_motion_term, solve_second_kind


@dataclass(frozen=True)
class Params:
    """Physical and solver parameters shared by every evaluation."""

    a_rho: float = 1.0
    g: float = 1.0
    rho2: float = 1.0
    epsilon: float = 0.0
    solver_tol: float = 1e-12
    solver_max_iter: int = 200
    filter_threshold: float = 0.0
    allow_kelvin_helmholtz: bool = False

    def __post_init__(self) -> None:
        if not -1.0 <= self.a_rho <= 1.0:
            raise ValueError(f"a_rho must lie in [-1, 1], got {self.a_rho}")
        if self.a_rho <= 0.0 and not (self.allow_kelvin_helmholtz and self.epsilon > 0.0):
            raise ValueError(
                "a_rho <= 0 is Kelvin-Helmholtz unstable; it requires "
                "allow_kelvin_helmholtz=True and epsilon > 0"
            )
        if self.rho2 <= 0.0:
            raise ValueError(f"rho2 must be positive, got {self.rho2}")
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.solver_tol <= 0.0:
            raise ValueError(f"solver_tol must be positive, got {self.solver_tol}")
        if self.solver_max_iter < 1:
            raise ValueError(f"solver_max_iter must be >= 1, got {self.solver_max_iter}")
        if self.filter_threshold < 0.0:
            raise ValueError(f"filter_threshold must be non-negative, got {self.filter_threshold}")


@dataclass(frozen=True)
class SimState:
    t: float
    z: Contour
    omega: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class StateDerivative:
    z_t: np.ndarray
    omega_t: np.ndarray
    br: np.ndarray
    c: np.ndarray
    B: float
    A_prime: float
    phi: np.ndarray
    solver_residual: float
    solver_iterations: int


def _stretch_rate(z: Contour, br: np.ndarray) -> np.ndarray:
    """G = (dz . d BR) / |dz|^2, the normalized tangential stretching."""
    dz = z.derivative()
    dbr = spectral_derivative(br)
    return np.sum(dz * dbr, axis=1) / np.sum(dz * dz, axis=1)


def tangential_speed(z: Contour, br: np.ndarray) -> np.ndarray:
    """Gauge speed with c' = mean(G) - G and c(-pi) = 0 exactly."""
    g_rate = _stretch_rate(z, br)
    p = spectral_antiderivative(g_rate - g_rate.mean())
    return p[0] - p


def b_and_a_prime(z: Contour, br: np.ndarray) -> tuple[float, float]:
    """Mean stretching B and the rate A' = 2 mean(dz . d BR)."""
    dz = z.derivative()
    dbr = spectral_derivative(br)
    dot = np.sum(dz * dbr, axis=1)
    b = float(np.mean(dot / np.sum(dz * dz, axis=1)))
    return b, 2.0 * float(np.mean(dot))


def phi_from_state(z: Contour, omega: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Upper Bernoulli trace phi = w/(2|dz|) - c|dz|."""
    dz = z.derivative()
    s = np.hypot(dz[:, 0], dz[:, 1])
    return omega / (2.0 * s) - c * s


def omega_rhs(
    z: Contour,
    omega: np.ndarray,
    z_t: np.ndarray,
    c: np.ndarray,
    phi: np.ndarray,
    params: Params,
) -> np.ndarray:
    """Right side of the second-kind system for w_t."""
    dz = z.derivative()
    s2 = np.sum(dz * dz, axis=1)
    br = z_t - c[:, None] * dz
    corr_dot = np.sum(br_motion_term(z, omega, z_t) * dz, axis=1)

    if params.a_rho == 1.0:
        _, a_prime = b_and_a_prime(z, br)
        rhs = (-2.0 * corr_dot - spectral_derivative(phi * phi)
               + c * a_prime - 2.0 * params.g * dz[:, 1])
    else:
        a = params.a_rho
        dbr = spectral_derivative(br)
        br_dot = np.sum(dz * dbr, axis=1)
        rhs = (-2.0 * a * corr_dot + spectral_derivative(c * omega)
               - a * spectral_derivative(omega * omega / (4.0 * s2))
               + 2.0 * a * c * br_dot - 2.0 * a * params.g * dz[:, 1])

    if params.epsilon > 0.0:
        rhs = rhs + params.epsilon * 2.0 * np.sqrt(s2) * spectral_derivative(phi, order=2)
    return rhs


def state_derivative(state: SimState, params: Params) -> StateDerivative:
    """Assemble (z_t, w_t) and the gauge fields for one state."""
    z = state.z
    kernel = BRKernelEval(z)
    br = kernel.apply(state.omega)
    c = tangential_speed(z, br)
    b_mean, a_prime = b_and_a_prime(z, br)
    z_t = br + c[:, None] * z.derivative()
    phi = phi_from_state(z, state.omega, c)
    rhs = omega_rhs(z, state.omega, z_t, c, phi, params)
    res = solve_second_kind(z, params.a_rho, rhs, tol=params.solver_tol,
                            max_iter=params.solver_max_iter, kernel=kernel)
    return StateDerivative(
        z_t=z_t, omega_t=res.x, br=br, c=c, B=b_mean, A_prime=a_prime, phi=phi,
        solver_residual=res.residual, solver_iterations=res.iterations,
    )
