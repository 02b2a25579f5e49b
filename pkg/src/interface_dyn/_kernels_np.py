"""Vectorized numpy reference implementation of the O(N^2) quadrature kernels.

Shared conventions (both backends):
  * alternating-point trapezoidal rule: only offsets j-k of odd parity enter,
    each with weight 2h (folded into the returned matrices / sums);
  * br_build_* return matrices (M1, M2) with BR(u) = (M1 @ u, M2 @ u);
  * corr_* return the curve-motion part of d/dt BR directly;
  * chord_scan_* return (max offset/chord ratio, min chord) over node pairs.
"""
import numpy as np

from .errors import CurveDegenerate

_mask_cache: dict = {}


def _alt_mask(n: int) -> np.ndarray:
    mask = _mask_cache.get(n)
    if mask is None:
        idx = np.arange(n)
        mask = ((idx[:, None] - idx[None, :]) % 2 == 1).astype(float)
        _mask_cache[n] = mask
    return mask


def _wrapped_offsets(nodes: np.ndarray) -> np.ndarray:
    d = nodes[:, None] - nodes[None, :]
    beta = d - 2.0 * np.pi * np.round(d / (2.0 * np.pi))
    beta[beta <= -np.pi] += 2.0 * np.pi  # representative in (-pi, pi]
    return beta


def br_build_closed(x: np.ndarray, y: np.ndarray, h: float):
    n = x.shape[0]
    w = _alt_mask(n)
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    r2 = dx * dx + dy * dy
    if np.any((r2 == 0.0) & (w > 0.0)):
        raise CurveDegenerate("coincident nodes in plane-kernel quadrature")
    r2 = np.where(w > 0.0, r2, 1.0)
    scale = h / np.pi
    m1 = scale * w * (-dy) / r2
    m2 = scale * w * dx / r2
    return m1, m2


def br_build_periodic(x: np.ndarray, y: np.ndarray, h: float):
    n = x.shape[0]
    w = _alt_mask(n)
    w1 = x[:, None] - x[None, :]
    w2 = y[:, None] - y[None, :]
    den = np.cosh(w2) - np.cos(w1)
    if np.any((den == 0.0) & (w > 0.0)):
        raise CurveDegenerate("coincident nodes in periodic-kernel quadrature")
    den = np.where(w > 0.0, den, 1.0)
    scale = h / (2.0 * np.pi)
    m1 = scale * w * (-np.sinh(w2)) / den
    m2 = scale * w * np.sin(w1) / den
    return m1, m2


def corr_closed(x, y, xt, yt, u, h):
    n = x.shape[0]
    w = _alt_mask(n)
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    dxt = xt[:, None] - xt[None, :]
    dyt = yt[:, None] - yt[None, :]
    r2 = dx * dx + dy * dy
    if np.any((r2 == 0.0) & (w > 0.0)):
        raise CurveDegenerate("coincident nodes in plane-kernel quadrature")
    r2 = np.where(w > 0.0, r2, 1.0)
    dot = dx * dxt + dy * dyt
    k1 = -dyt / r2 + 2.0 * dy * dot / (r2 * r2)
    k2 = dxt / r2 - 2.0 * dx * dot / (r2 * r2)
    scale = h / np.pi
    return scale * ((w * k1) @ u), scale * ((w * k2) @ u)


def corr_periodic(x, y, xt, yt, u, h):
    # d/dt of the cotangent kernel: csc^2((w1+i w2)/2) = 2 (P - iQ)/(P^2+Q^2)
    n = x.shape[0]
    w = _alt_mask(n)
    w1 = x[:, None] - x[None, :]
    w2 = y[:, None] - y[None, :]
    dxt = xt[:, None] - xt[None, :]
    dyt = yt[:, None] - yt[None, :]
    p = 1.0 - np.cos(w1) * np.cosh(w2)
    q = np.sin(w1) * np.sinh(w2)
    r = p * p + q * q
    if np.any((r == 0.0) & (w > 0.0)):
        raise CurveDegenerate("coincident nodes in periodic-kernel quadrature")
    r = np.where(w > 0.0, r, 1.0)
    k1 = -(dyt * p - dxt * q) / r
    k2 = -(dxt * p + dyt * q) / r
    scale = h / (2.0 * np.pi)
    return scale * ((w * k1) @ u), scale * ((w * k2) @ u)


def chord_scan_closed(x, y, nodes):
    beta = _wrapped_offsets(nodes)
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    return _scan(beta, dx, dy)


def chord_scan_periodic(px, py, nodes):
    beta = _wrapped_offsets(nodes)
    dx = beta + px[:, None] - px[None, :]
    dy = py[:, None] - py[None, :]
    return _scan(beta, dx, dy)


def _scan(beta, dx, dy):
    d2 = dx * dx + dy * dy
    off = beta != 0.0
    min_chord = float(np.sqrt(d2[off].min()))
    if min_chord == 0.0:
        return float("inf"), 0.0
    ratio = np.abs(beta[off]) / np.sqrt(d2[off])
    return float(ratio.max()), min_chord
