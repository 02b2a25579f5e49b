"""Principal-value quadratures and the second-kind tangential solve.

Average (Birkhoff-Rott) velocity of a vortex sheet with density w along the
curve z(a):

    closed curve:  BR(z,w)(a) = (1/2pi) PV int w(b) (-Dy, Dx)/|Dz|^2 db
    periodic:      BR(z,w)(a) = conj[ (1/4pi i) PV int w(b) cot((z(a)-z(b))/2) db ]

Both are discretized with the alternating-point trapezoidal rule (odd offsets,
weight 2h), which is spectrally accurate and needs no desingularization at
the diagonal.  The cotangent kernel is evaluated in real arithmetic through

    cot((w1 + i w2)/2) = (sin w1 - i sinh w2) / (cosh w2 - cos w1).

The operator T w = 2 BR(z,w) . dz/da and the sheet-strength equation's
second-kind system (I + A T) x = b are solved matrix-free with GMRES on the
precomputed kernel matrices, with an explicit max-norm residual check.
"""
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from . import _backend
from .errors import NoConvergence
from .geometry import Contour, GeometryKind


class BRKernelEval:
    """Precomputed quadrature matrices for repeated BR applications on one curve."""

    def __init__(self, z: Contour) -> None:
        pos = z.positions()
        x = np.ascontiguousarray(pos[:, 0])
        y = np.ascontiguousarray(pos[:, 1])
        h = z.grid.h
        if z.kind is GeometryKind.PERIODIC:
            self.m1, self.m2 = _backend.br_build_periodic(x, y, h)
        else:
            self.m1, self.m2 = _backend.br_build_closed(x, y, h)

    def apply(self, u: np.ndarray) -> np.ndarray:
        return np.stack([self.m1 @ u, self.m2 @ u], axis=1)


def birkhoff_rott(z: Contour, u: np.ndarray) -> np.ndarray:
    """Average velocity induced by sheet strength u along z, sampled at the nodes."""
    return BRKernelEval(z).apply(u)


def br_motion_term(z: Contour, u: np.ndarray, z_t: np.ndarray) -> np.ndarray:
    """Part of d/dt BR(z,u) coming from the curve motion z_t at frozen u."""
    pos = z.positions()
    x = np.ascontiguousarray(pos[:, 0])
    y = np.ascontiguousarray(pos[:, 1])
    xt = np.ascontiguousarray(z_t[:, 0])
    yt = np.ascontiguousarray(z_t[:, 1])
    uu = np.ascontiguousarray(u)
    h = z.grid.h
    if z.kind is GeometryKind.PERIODIC:
        v1, v2 = _backend.corr_periodic(x, y, xt, yt, uu, h)
    else:
        v1, v2 = _backend.corr_closed(x, y, xt, yt, uu, h)
    return np.stack([v1, v2], axis=1)


def dt_birkhoff_rott(z: Contour, u: np.ndarray, z_t: np.ndarray, u_t: np.ndarray) -> np.ndarray:
    """Material time derivative of BR(z,u) given the rates z_t and u_t."""
    return birkhoff_rott(z, u_t) + br_motion_term(z, u, z_t)


def apply_T(z: Contour, u: np.ndarray, kernel: BRKernelEval | None = None) -> np.ndarray:
    """T u = 2 BR(z,u) . dz/da, the tangential double-layer operator."""
    if kernel is None:
        kernel = BRKernelEval(z)
    v = kernel.apply(u)
    dz = z.derivative()
    return 2.0 * (v[:, 0] * dz[:, 0] + v[:, 1] * dz[:, 1])


def _null_pair(
    a_rho: float,
    kernel: BRKernelEval,
    dz: np.ndarray,
    max_sweeps: int = 500,
    eig_tol: float = 1e-13,
) -> tuple[np.ndarray, np.ndarray] | None:
    """Left/right null vectors of I + a_rho T, or None if it has full rank.

    The alternating-point rule couples opposite parities only, so the
    sawtooth s_j = (-1)^j satisfies T(s w) = -s (T w) exactly and T's
    eigenvalue-1 eigenfunction w (a constant on the unit circle, the
    equilibrium density in general -- it exists for every closed curve)
    reappears as an exact null vector s w of I + a_rho T at |a_rho| = 1.
    Power iteration on (I - a_rho T)/2, whose spectrum sits in [0, 1] with
    the null direction at exactly 1, yields the vectors; the transpose twin
    uses M1^T = -M1, M2^T = -M2.
    """
    n = dz.shape[0]
    rng = np.random.default_rng(0)

    def t_apply(x: np.ndarray) -> np.ndarray:
        v = kernel.apply(x)
        return 2.0 * (v[:, 0] * dz[:, 0] + v[:, 1] * dz[:, 1])

    def t_transpose_apply(u: np.ndarray) -> np.ndarray:
        v1 = kernel.apply(dz[:, 0] * u)
        v2 = kernel.apply(dz[:, 1] * u)
        return -2.0 * (v1[:, 0] + v2[:, 1])

    def dominant(apply_op) -> np.ndarray | None:
        v = rng.standard_normal(n)
        for _ in range(max_sweeps):
            v /= np.linalg.norm(v)
            fv = 0.5 * (v - a_rho * apply_op(v))
            theta = float(v @ fv)
            if np.max(np.abs(fv - theta * v)) <= eig_tol:
                return fv / np.linalg.norm(fv) if abs(theta - 1.0) <= 1e-6 else None
            v = fv
        return None

    v = dominant(t_apply)
    if v is None:
        return None
    u = dominant(t_transpose_apply)
    if u is None:
        return None
    return u, v


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    residual: float
    iterations: int


def solve_second_kind(
    z: Contour,
    a_rho: float,
    b: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 200,
    kernel: BRKernelEval | None = None,
) -> SolveResult:
    """Solve (I + a_rho T) x = b to a verified max-norm residual.

    GMRES is run with a 2-norm target of tol/sqrt(n) so that the max-norm
    bound tol * |b|_inf is implied; the residual is then re-measured in the
    max norm.  If the bound is missed and the system carries the rank-1
    parity defect of the alternating rule (see _null_pair), the solve is
    repeated in the complement of the null pair; NoConvergence is raised
    only when that too fails to meet the bound.
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    b_scale = float(np.max(np.abs(b)))
    if b_scale == 0.0:
        return SolveResult(np.zeros(n), 0.0, 0)
    if a_rho == 0.0:
        return SolveResult(b.copy(), 0.0, 0)

    if kernel is None:
        kernel = BRKernelEval(z)
    dz = z.derivative()
    calls = 0

    def matvec(x: np.ndarray) -> np.ndarray:
        nonlocal calls
        calls += 1
        v = kernel.apply(x)
        return x + a_rho * 2.0 * (v[:, 0] * dz[:, 0] + v[:, 1] * dz[:, 1])

    op = LinearOperator((n, n), matvec=matvec, dtype=float)
    x, _ = gmres(op, b, rtol=tol / np.sqrt(n), atol=0.0,
                 restart=min(max_iter, n), maxiter=1)
    r = matvec(x) - b
    iterations = max(calls - 2, 1)  # initial residual + final check are not steps
    residual = float(np.max(np.abs(r)))
    if residual <= tol * b_scale:
        return SolveResult(x, residual, iterations)

    # A stalled solve usually signals the parity defect of the alternating
    # rule; retry in the complement of the artifact null pair.  The discarded
    # component of b is quadrature noise the grid cannot represent (the same
    # band the spectral derivative drops).
    pair = _null_pair(a_rho, kernel, dz)
    if pair is None:
        raise NoConvergence(residual, iterations)
    u, v = pair
    b = b - (u @ b) / (u @ u) * u
    b_scale = float(np.max(np.abs(b)))
    if b_scale == 0.0:
        return SolveResult(np.zeros(n), 0.0, iterations)

    def deflated(x: np.ndarray) -> np.ndarray:
        # replace the null direction by an eigenvalue-1 block so GMRES does
        # not wander along it (the wandering component is rounded into real
        # error when the residual is formed)
        cv = (v @ x) / (v @ v)
        return matvec(x - cv * v) + cv * v

    op_defl = LinearOperator((n, n), matvec=deflated, dtype=float)
    x, _ = gmres(op_defl, b, rtol=tol / np.sqrt(n), atol=0.0,
                 restart=min(max_iter, n), maxiter=1)
    x = x - (v @ x) / (v @ v) * v
    r = matvec(x) - b
    iterations = max(calls - 4, 1)  # two init/verify residual evaluations
    residual = float(np.max(np.abs(r)))
    if residual > tol * b_scale:
        raise NoConvergence(residual, iterations)
    return SolveResult(x, residual, iterations)
