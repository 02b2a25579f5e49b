"""Oracle tests for the spectral-calculus and curve-geometry primitives.

Frozen values used below:
    sobolev_norm(cos a, 0) = sqrt(pi)      = 1.7724538509055159
    sobolev_norm(cos a, 1) = sqrt(2 pi)    = 2.5066282746310002
    arc_chord(flat line)   = 1
    arc_chord(unit circle) = pi/2          = 1.5707963267948966
"""
import numpy as np
import pytest

from interface_dyn.errors import CurveDegenerate
from interface_dyn.geometry import (
    Contour,
    GeometryKind,
    Grid,
    arc_chord,
    hilbert_transform,
    krasny_filter,
    lambda_power,
    sobolev_norm,
    spectral_antiderivative,
    spectral_derivative,
    tangent_uniformity,
    trig_interp,
)


def flat_line(n: int) -> Contour:
    return Contour(GeometryKind.PERIODIC, np.zeros((n, 2)))


def unit_circle(n: int, radius: float = 1.0) -> Contour:
    a = Grid(n).nodes
    return Contour(GeometryKind.CLOSED, radius * np.stack([np.cos(a), np.sin(a)], axis=1))


# ---------------------------------------------------------------------------
# grids and contours
# ---------------------------------------------------------------------------

def test_grid_basic() -> None:
    g = Grid(32)
    assert g.h == 2.0 * np.pi / 32
    assert g.nodes[0] == -np.pi
    assert g.nodes[-1] == pytest.approx(np.pi - g.h)
    with pytest.raises(Exception):
        Grid(33)  # odd
    with pytest.raises(Exception):
        Grid(8)  # too small


def test_contour_positions_and_derivative_flat() -> None:
    z = flat_line(32)
    pos = z.positions()
    assert np.array_equal(pos[:, 0], Grid(32).nodes)
    assert np.all(pos[:, 1] == 0.0)
    dz = z.derivative()
    assert np.allclose(dz[:, 0], 1.0, atol=1e-15)
    assert np.all(dz[:, 1] == 0.0)


def test_contour_derivative_circle() -> None:
    z = unit_circle(64)
    a = z.grid.nodes
    dz = z.derivative()
    assert np.max(np.abs(dz[:, 0] + np.sin(a))) < 1e-13
    assert np.max(np.abs(dz[:, 1] - np.cos(a))) < 1e-13


# ---------------------------------------------------------------------------
# spectral derivative
# ---------------------------------------------------------------------------

def test_derivative_cosine() -> None:
    a = Grid(32).nodes
    df = spectral_derivative(np.cos(a))
    assert np.max(np.abs(df + np.sin(a))) < 1e-13


def test_second_derivative_sine() -> None:
    a = Grid(64).nodes
    d2 = spectral_derivative(np.sin(3 * a), order=2)
    assert np.max(np.abs(d2 + 9 * np.sin(3 * a))) < 1e-11


def test_derivative_analytic_function() -> None:
    a = Grid(64).nodes
    f = np.exp(np.sin(a))
    df = spectral_derivative(f)
    assert np.max(np.abs(df - np.cos(a) * f)) < 1e-10


def test_derivative_nyquist_convention() -> None:
    # odd-order derivatives zero the unpaired Nyquist mode
    a = Grid(32).nodes
    f = np.cos(16 * a)
    assert np.max(np.abs(spectral_derivative(f))) < 1e-12
    # even orders keep it: second derivative is -256 cos(16a)
    d2 = spectral_derivative(f, order=2)
    assert np.max(np.abs(d2 + 256 * np.cos(16 * a))) < 1e-9


def test_derivative_spectral_convergence() -> None:
    def err(n: int) -> float:
        a = Grid(n).nodes
        f = np.exp(np.sin(a))
        return float(np.max(np.abs(spectral_derivative(f) - np.cos(a) * f)))

    assert err(16) > 10 * err(32)


def test_derivative_shift_equivariance() -> None:
    rng = np.random.default_rng(0)
    f = rng.standard_normal(64)
    lhs = spectral_derivative(np.roll(f, 5))
    rhs = np.roll(spectral_derivative(f), 5)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_derivative_vector_field() -> None:
    a = Grid(32).nodes
    f = np.stack([np.cos(a), np.sin(2 * a)], axis=1)
    df = spectral_derivative(f)
    assert np.max(np.abs(df[:, 0] + np.sin(a))) < 1e-13
    assert np.max(np.abs(df[:, 1] - 2 * np.cos(2 * a))) < 1e-13


# ---------------------------------------------------------------------------
# Hilbert transform and fractional derivative
# ---------------------------------------------------------------------------

def test_hilbert_modes() -> None:
    a = Grid(64).nodes
    for k in (1, 3, 7):
        assert np.max(np.abs(hilbert_transform(np.cos(k * a)) - np.sin(k * a))) < 1e-13
        assert np.max(np.abs(hilbert_transform(np.sin(k * a)) + np.cos(k * a))) < 1e-13
    assert np.max(np.abs(hilbert_transform(np.full(64, 2.7)))) < 1e-14


def _nyquist_free(f: np.ndarray) -> np.ndarray:
    # H and odd derivatives zero the unresolved n/2 mode; identities relating
    # them hold on the complementary subspace, so test vectors live there
    coef = np.fft.fft(f)
    coef[f.shape[0] // 2] = 0.0
    return np.fft.ifft(coef).real


def test_hilbert_involution() -> None:
    rng = np.random.default_rng(1)
    f = _nyquist_free(rng.standard_normal(64))
    hh = hilbert_transform(hilbert_transform(f))
    assert np.max(np.abs(hh + (f - f.mean()))) < 1e-12


def test_lambda_is_hilbert_of_derivative() -> None:
    rng = np.random.default_rng(2)
    f = _nyquist_free(rng.standard_normal(64))
    lhs = lambda_power(f, 1.0)
    rhs = hilbert_transform(spectral_derivative(f))
    assert np.max(np.abs(lhs - rhs)) < 1e-11


def test_lambda_modes_and_semigroup() -> None:
    a = Grid(64).nodes
    f = np.cos(5 * a)
    assert np.max(np.abs(lambda_power(f, 1.0) - 5 * f)) < 1e-12
    half = lambda_power(lambda_power(f, 0.5), 0.5)
    assert np.max(np.abs(half - lambda_power(f, 1.0))) < 1e-12
    assert np.array_equal(lambda_power(f, 0.0), f)


# ---------------------------------------------------------------------------
# Sobolev norms
# ---------------------------------------------------------------------------

def test_sobolev_norm_frozen_values() -> None:
    a = Grid(64).nodes
    f = np.cos(a)
    assert sobolev_norm(f, 0.0) == pytest.approx(1.7724538509055159, abs=1e-13)
    assert sobolev_norm(f, 1.0) == pytest.approx(2.5066282746310002, abs=1e-13)
    const = np.full(64, 3.0)
    assert sobolev_norm(const, 2.0) == pytest.approx(3.0 * np.sqrt(2 * np.pi), abs=1e-13)


def test_sobolev_norm_parseval() -> None:
    rng = np.random.default_rng(3)
    f = rng.standard_normal(128)
    l2 = np.sqrt(2 * np.pi * np.mean(f * f))
    assert sobolev_norm(f, 0.0) == pytest.approx(l2, rel=1e-13)


def test_sobolev_norm_vector() -> None:
    a = Grid(32).nodes
    f = np.stack([np.cos(a), np.zeros(32)], axis=1)
    assert sobolev_norm(f, 0.0) == pytest.approx(np.sqrt(np.pi), abs=1e-13)
    g = np.stack([np.cos(a), np.cos(a)], axis=1)
    assert sobolev_norm(g, 0.0) == pytest.approx(np.sqrt(2 * np.pi), abs=1e-13)


# ---------------------------------------------------------------------------
# antiderivative, interpolation
# ---------------------------------------------------------------------------

def test_antiderivative_modes() -> None:
    a = Grid(64).nodes
    p = spectral_antiderivative(np.cos(3 * a))
    assert np.max(np.abs(p - np.sin(3 * a) / 3)) < 1e-13
    # mean part of the input is discarded, output is mean-free
    p2 = spectral_antiderivative(2.0 + np.cos(3 * a))
    assert np.max(np.abs(p2 - p)) < 1e-13
    assert abs(p2.mean()) < 1e-14


def test_antiderivative_inverts_derivative() -> None:
    a = Grid(64).nodes
    f = np.exp(np.cos(a))
    f0 = f - f.mean()
    back = spectral_derivative(spectral_antiderivative(f0))
    assert np.max(np.abs(back - f0)) < 1e-11


def test_trig_interp_band_limited() -> None:
    n = 32
    a = Grid(n).nodes
    f = np.cos(2 * a) - 0.3 * np.sin(5 * a)
    x = np.array([-3.0, -1.234, 0.0, 0.7, 2.9])
    vals = trig_interp(f, x)
    exact = np.cos(2 * x) - 0.3 * np.sin(5 * x)
    assert np.max(np.abs(vals - exact)) < 1e-12
    # reproduces samples at the nodes
    assert np.max(np.abs(trig_interp(f, a) - f)) < 1e-12


# ---------------------------------------------------------------------------
# arc-chord and uniformity
# ---------------------------------------------------------------------------

def test_arc_chord_flat() -> None:
    assert arc_chord(flat_line(64)) == pytest.approx(1.0, abs=1e-12)


def test_arc_chord_circle() -> None:
    assert arc_chord(unit_circle(64)) == pytest.approx(1.5707963267948966, abs=1e-12)
    # scaling: radius 2 doubles chords and the tangent, halving nothing else
    assert arc_chord(unit_circle(64, radius=2.0)) == pytest.approx(np.pi / 4, abs=1e-12)


def test_arc_chord_periodic_bump() -> None:
    n = 64
    a = Grid(n).nodes
    p = np.stack([np.zeros(n), 0.1 * np.cos(a)], axis=1)
    f = arc_chord(Contour(GeometryKind.PERIODIC, p))
    assert 1.0 <= f < 1.2


def test_arc_chord_degenerate() -> None:
    z = unit_circle(32)
    samples = z.samples.copy()
    samples[20] = samples[5]
    with pytest.raises(CurveDegenerate):
        arc_chord(Contour(GeometryKind.CLOSED, samples))


def test_tangent_uniformity() -> None:
    assert tangent_uniformity(flat_line(32)) == 0.0
    assert tangent_uniformity(unit_circle(64)) < 1e-13
    n = 128
    a = Grid(n).nodes
    p = np.stack([0.1 * np.sin(a), np.zeros(n)], axis=1)
    u = tangent_uniformity(Contour(GeometryKind.PERIODIC, p))
    s2 = (1 + 0.1 * np.cos(a)) ** 2
    expected = np.max(np.abs(s2 - s2.mean())) / s2.mean()
    assert u == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------------------
# Krasny filter
# ---------------------------------------------------------------------------

def test_krasny_filter_zeros_small_modes() -> None:
    n = 64
    a = Grid(n).nodes
    f = np.cos(2 * a) + 1e-15 * np.cos(20 * a)
    out = krasny_filter(f, 1e-13)
    coef = np.fft.fft(out) / n
    assert abs(coef[20]) == 0.0
    assert abs(coef[2] - 0.5) < 1e-14
    # large modes pass through untouched
    clean = krasny_filter(np.cos(2 * a), 1e-13)
    assert np.max(np.abs(clean - np.cos(2 * a))) < 1e-15


def test_krasny_filter_vector_per_field() -> None:
    n = 32
    a = Grid(n).nodes
    f = np.stack([np.cos(a) + 1e-16 * np.cos(10 * a), 1e-16 * np.cos(10 * a)], axis=1)
    out = krasny_filter(f, 1e-13)
    c0 = np.fft.fft(out[:, 0]) / n
    c1 = np.fft.fft(out[:, 1]) / n
    assert abs(c0[10]) == 0.0
    # second field's max mode is the 1e-16 one itself; it must survive
    assert abs(c1[10]) > 0.0
