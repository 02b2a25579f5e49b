"""Pointwise Rayleigh-Taylor function, energy functional and run records.

The pressure-jump (Rayleigh-Taylor) field along the interface is

    sigma = (rho2 + rho1) [ A (dtBR + w^2/(4 s^4) z_aa) . dz^perp
                            + (w/s^2 - A c) (dBR . dz^perp) + g A dz1 ],

with s = |dz/da|, dz^perp = (-dz2, dz1), rho1 = rho2 (1-A)/(1+A).  For the
water-wave case A = 1 this reduces pointwise to the trace form tested in the
oracle suite.  The sign condition min sigma > 0 is what the energy estimate
needs; its loss is reported, not clamped.

The energy is

    E^2 = |z|_{H^{k-1}}^2 + h sum sigma/(rho2 s^2) |d^k z|^2
          + (arc-chord)^2 + |w|_{H^{k-2}}^2 + |phi|_{H^{k-1/2}}^2,

and E_RT = E^2 + 1/m with m = min sigma/(rho2 s^2), reported as +inf when
the sign condition fails.
"""
from dataclasses import dataclass

import numpy as np

from .dynamics import Params, SimState, StateDerivative
from .errors import ResolutionExceeded
from .geometry import arc_chord, sobolev_norm, spectral_derivative, tangent_uniformity
from .singular_ops import dt_birkhoff_rott


def sigma_field(
    z,
    omega: np.ndarray,
    phi: np.ndarray,
    z_t: np.ndarray,
    dt_br: np.ndarray,
    params: Params,
) -> np.ndarray:
    """Rayleigh-Taylor function from the state, its velocity and d/dt BR."""
    dz = z.derivative()
    s2 = np.sum(dz * dz, axis=1)
    s = np.sqrt(s2)
    perp = np.stack([-dz[:, 1], dz[:, 0]], axis=1)
    d2z = z.derivative(order=2)

    c = omega / (2.0 * s2) - phi / s
    br = z_t - c[:, None] * dz
    dbr = spectral_derivative(br)

    a = params.a_rho
    rho1 = params.rho2 * (1.0 - a) / (1.0 + a)
    first = np.sum((dt_br + (omega ** 2 / (4.0 * s2 * s2))[:, None] * d2z) * perp, axis=1)
    second = (omega / s2 - a * c) * np.sum(dbr * perp, axis=1)
    return (params.rho2 + rho1) * (a * first + second + params.g * a * dz[:, 0])


def sigma_from_derivative(state: SimState, deriv: StateDerivative, params: Params) -> np.ndarray:
    dt_br = dt_birkhoff_rott(state.z, state.omega, deriv.z_t, deriv.omega_t)
    return sigma_field(state.z, state.omega, deriv.phi, deriv.z_t, dt_br, params)


@dataclass(frozen=True)
class EnergyResult:
    e: float
    e_rt: float
    valid: bool
    sigma_term: float


def energy(
    state: SimState,
    deriv: StateDerivative,
    sigma: np.ndarray,
    k: int,
    params: Params,
) -> EnergyResult:
    """Sobolev-type energy at derivative order k (needs k <= n/4)."""
    grid = state.z.grid
    if k > grid.n // 4:
        raise ResolutionExceeded(f"energy order k={k} needs n >= {4 * k}, got n={grid.n}")
    dz = state.z.derivative()
    s2 = np.sum(dz * dz, axis=1)
    weight = sigma / (params.rho2 * s2)
    m = float(weight.min())

    dkz = state.z.derivative(order=k)
    sigma_term = float(grid.h * np.sum(weight * np.sum(dkz * dkz, axis=1)))
    total = (sobolev_norm(state.z.samples, k - 1.0) ** 2
             + sigma_term
             + arc_chord(state.z) ** 2
             + sobolev_norm(state.omega, k - 2.0) ** 2
             + sobolev_norm(deriv.phi, k - 0.5) ** 2)
    e = float(np.sqrt(max(total, 0.0)))
    valid = m > 0.0
    e_rt = e * e + 1.0 / m if valid else float("inf")
    return EnergyResult(e=e, e_rt=e_rt, valid=valid, sigma_term=sigma_term)


def conservation(state: SimState) -> tuple[float, float]:
    """Mean strength (circulation / 2 pi) and tangential uniformity defect."""
    return float(np.mean(state.omega)), tangent_uniformity(state.z)


@dataclass(frozen=True)
class DiagRecord:
    t: float
    A: float
    B: float
    min_sigma: float
    arc_chord: float
    energy: float
    e_rt: float
    mean_omega: float
    max_speed: float
    uniformity: float
    solver_residual: float
    solver_iters: int


def assemble_record(
    state: SimState,
    deriv: StateDerivative,
    params: Params,
    k: int = 4,
    sigma: np.ndarray | None = None,
) -> DiagRecord:
    """One diagnostics row; sigma may be passed to avoid recomputation."""
    if sigma is None:
        sigma = sigma_from_derivative(state, deriv, params)
    en = energy(state, deriv, sigma, k, params)
    dz = state.z.derivative()
    mean_omega, uniformity = conservation(state)
    return DiagRecord(
        t=state.t,
        A=2.0 * float(np.mean(np.sum(dz * dz, axis=1))),
        B=deriv.B,
        min_sigma=float(sigma.min()),
        arc_chord=arc_chord(state.z),
        energy=en.e,
        e_rt=en.e_rt,
        mean_omega=mean_omega,
        max_speed=float(np.max(np.hypot(deriv.z_t[:, 0], deriv.z_t[:, 1]))),
        uniformity=uniformity,
        solver_residual=deriv.solver_residual,
        solver_iters=deriv.solver_iterations,
    )
