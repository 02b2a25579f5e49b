"""Curve representation and periodic spectral calculus on [-pi, pi).

Two curve families share one sample layout:
  * CLOSED:   z(a) itself is 2pi-periodic; samples hold z at the nodes.
  * PERIODIC: z(a) = (a, 0) + p(a) with p 2pi-periodic; samples hold p.

All transforms act along axis 0 so scalar fields (N,) and vector fields (N, 2)
go through the same code. Mode k runs over the usual FFT integers; the unpaired
Nyquist mode is treated as a pure cosine (odd-order derivatives zero it).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveDegenerate
from . import _backend


class GeometryKind(enum.Enum):
    CLOSED = "closed"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid:
    """Uniform nodes a_j = -pi + j h, j = 0..n-1, h = 2pi/n."""

    n: int

    def __post_init__(self) -> None:
        if self.n % 2 != 0 or self.n < 16:
            raise ValueError(f"grid size must be even and >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def nodes(self) -> np.ndarray:
        return -np.pi + self.h * np.arange(self.n)

    @property
    def modes(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, d=1.0 / self.n)


@dataclass(frozen=True)
class Contour:
    """Sampled interface curve; `samples` is (N, 2), the periodic part only."""

    kind: GeometryKind
    samples: np.ndarray = field(repr=False)

    @property
    def grid(self) -> Grid:
        return Grid(self.samples.shape[0])

    def positions(self) -> np.ndarray:
        """Actual curve points z(a_j)."""
        if self.kind is GeometryKind.PERIODIC:
            pos = self.samples.copy()
            pos[:, 0] += self.grid.nodes
            return pos
        return self.samples

    def derivative(self, order: int = 1) -> np.ndarray:
        """d^order z / da^order at the nodes (the linear part contributes (1,0))."""
        d = spectral_derivative(self.samples, order=order)
        if self.kind is GeometryKind.PERIODIC and order == 1:
            d = d.copy()
            d[:, 0] += 1.0
        return d


# ---------------------------------------------------------------------------
# Fourier multipliers
# ---------------------------------------------------------------------------

def _modes(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n)


def _apply_multiplier(f: np.ndarray, mult: np.ndarray) -> np.ndarray:
    coef = np.fft.fft(f, axis=0)
    coef *= mult if f.ndim == 1 else mult[:, None]
    return np.fft.ifft(coef, axis=0).real


def spectral_derivative(f: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral d^order/da^order; odd orders zero the unpaired Nyquist mode."""
    n = f.shape[0]
    k = _modes(n)
    mult = (1j * k) ** order
    if order % 2 == 1:
        mult[n // 2] = 0.0
    return _apply_multiplier(f, mult)


def hilbert_transform(f: np.ndarray) -> np.ndarray:
    """Periodic Hilbert transform: cos(ka) -> sin(ka); kills the mean."""
    n = f.shape[0]
    k = _modes(n)
    mult = -1j * np.sign(k)
    mult[n // 2] = 0.0
    return _apply_multiplier(f, mult)


def lambda_power(f: np.ndarray, s: float) -> np.ndarray:
    """Fractional derivative |k|^s (Lambda = H d/da); s = 0 is the identity."""
    if s == 0.0:
        return f.copy()
    n = f.shape[0]
    mult = np.abs(_modes(n)) ** s + 0j
    return _apply_multiplier(f, mult)


def spectral_antiderivative(f: np.ndarray) -> np.ndarray:
    """Mean-free primitive of the mean-free part of f."""
    n = f.shape[0]
    k = _modes(n)
    mult = np.zeros(n, dtype=complex)
    nonzero = k != 0
    mult[nonzero] = 1.0 / (1j * k[nonzero])
    mult[n // 2] = 0.0
    return _apply_multiplier(f, mult)


def sobolev_norm(f: np.ndarray, s: float) -> float:
    """H^s norm (2pi sum_k (1+k^2)^s |c_k|^2)^(1/2); columns add in quadrature."""
    n = f.shape[0]
    coef = np.fft.fft(f, axis=0) / n
    weight = (1.0 + _modes(n) ** 2) ** s
    mags = np.abs(coef) ** 2
    if f.ndim > 1:
        mags = mags.sum(axis=1)
    return float(np.sqrt(2.0 * np.pi * np.sum(weight * mags)))


def trig_interp(f: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of samples f at points x."""
    n = f.shape[0]
    coef = np.fft.fft(f, axis=0) / n
    k = _modes(n)
    phase = np.exp(1j * np.outer(x + np.pi, k))  # nodes are a_j = -pi + j h
    phase[:, n // 2] = np.cos(k[n // 2] * (x + np.pi))
    return (phase @ coef).real


def krasny_filter(f: np.ndarray, threshold: float) -> np.ndarray:
    """Zero Fourier modes below threshold * (largest mode), per field."""
    if threshold <= 0.0:
        return f.copy()
    coef = np.fft.fft(f, axis=0)
    mags = np.abs(coef)
    peak = mags.max(axis=0)
    coef[mags < threshold * peak] = 0.0
    return np.fft.ifft(coef, axis=0).real


# ---------------------------------------------------------------------------
# curve-quality functionals
# ---------------------------------------------------------------------------

def arc_chord(z: Contour) -> float:
    """Arc-chord constant: sup |b| / |z(a) - z(a-b)|, plus the 1/|dz| diagonal.

    Offsets use the representative of a_j - a_k in (-pi, pi]; for PERIODIC
    curves the horizontal chord component carries the matching 2pi shift.
    """
    x, y = z.samples[:, 0], z.samples[:, 1]
    nodes = z.grid.nodes
    if z.kind is GeometryKind.PERIODIC:
        ratio, min_chord = _backend.chord_scan_periodic(x, y, nodes)
    else:
        ratio, min_chord = _backend.chord_scan_closed(x, y, nodes)
    if min_chord == 0.0:
        raise CurveDegenerate("coincident nodes: zero chord between distinct offsets")
    dz = z.derivative()
    speed = np.hypot(dz[:, 0], dz[:, 1])
    smin = float(speed.min())
    if smin == 0.0:
        raise CurveDegenerate("vanishing tangent vector")
    return max(float(ratio), 1.0 / smin)


def tangent_uniformity(z: Contour) -> float:
    """max_a | |dz|^2 - mean | / mean: zero iff the parametrization is even."""
    dz = z.derivative()
    s2 = dz[:, 0] ** 2 + dz[:, 1] ** 2
    m = float(s2.mean())
    return float(np.max(np.abs(s2 - m)) / m)
