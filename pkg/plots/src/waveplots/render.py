"""Figure rendering from the run-directory CSV formats.

    diag.csv       t,A,B,min_sigma,arc_chord,energy,e_rt,mean_omega,
                   max_speed,uniformity,solver_residual,solver_iters
    snap_*.csv     alpha,x,y,omega,phi,sigma,c       (one row per node)

The reader is deliberately strict: a wrong header, a short row or a field
that does not parse as a number aborts with the file name and 1-based row
number, so a truncated run is diagnosed instead of silently plotted.
"""
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DIAG_COLUMNS = ("t", "A", "B", "min_sigma", "arc_chord", "energy", "e_rt",
                "mean_omega", "max_speed", "uniformity", "solver_residual",
                "solver_iters")
SNAPSHOT_COLUMNS = ("alpha", "x", "y", "omega", "phi", "sigma", "c")


class RenderError(Exception):
    """A run directory that cannot be rendered (missing or malformed files)."""


@dataclass(frozen=True)
class RenderResult:
    outputs: tuple[Path, ...]
    series: tuple[str, ...]
    warnings: tuple[str, ...]


# ---------------------------------------------------------------------------
# strict CSV reading
# ---------------------------------------------------------------------------

def _read_table(path: Path, columns: tuple[str, ...]) -> np.ndarray:
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from None
    if not lines or tuple(lines[0].split(",")) != columns:
        raise RenderError(f"{path.name} row 1: expected header {','.join(columns)}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(columns):
            raise RenderError(
                f"{path.name} row {i}: expected {len(columns)} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise RenderError(f"{path.name} row {i}: non-numeric field") from None
    if not rows:
        raise RenderError(f"{path.name}: no data rows")
    return np.asarray(rows, dtype=float)


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _render_diagnostics(run_dir: Path, diag: np.ndarray) -> Path:
    t = diag[:, 0]
    fig, axes = plt.subplots(4, 3, figsize=(11.0, 10.0), sharex=True)
    flat = axes.ravel()
    for ax, name, values in zip(flat, DIAG_COLUMNS[1:], diag[:, 1:].T):
        ax.plot(t, values, lw=1.0)
        ax.set_title(name, fontsize=9)
        ax.grid(True, alpha=0.3)
    for ax in flat[len(DIAG_COLUMNS) - 1:]:
        ax.set_visible(False)
    for ax in axes[-1]:
        ax.set_xlabel("t")
    fig.tight_layout()
    path = run_dir / "diagnostics.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def _render_interface(run_dir: Path, snaps: list[np.ndarray]) -> Path:
    cmap = matplotlib.colormaps["viridis"]
    m = len(snaps)
    fig, ax = plt.subplots(figsize=(7.0, 5.5))
    for i, snap in enumerate(snaps):
        ax.plot(snap[:, 1], snap[:, 2], color=cmap(i / max(m - 1, 1)), lw=1.0)
    mappable = matplotlib.cm.ScalarMappable(
        cmap=cmap, norm=matplotlib.colors.Normalize(0, max(m - 1, 1)))
    fig.colorbar(mappable, ax=ax, label="snapshot")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = run_dir / "interface.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def _render_sigma(run_dir: Path, snaps: list[np.ndarray]) -> Path:
    sigma = np.stack([s[:, 5] for s in snaps])
    alpha = snaps[0][:, 0]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    mesh = ax.pcolormesh(alpha, np.arange(len(snaps)), sigma, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="sigma")
    ax.set_xlabel("alpha")
    ax.set_ylabel("snapshot")
    fig.tight_layout()
    path = run_dir / "sigma_heatmap.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def render_run(run_dir) -> RenderResult:
    """Render diagnostics.png, and interface.png + sigma_heatmap.png when
    snapshots exist, into run_dir; snapshots are overlaid in time order."""
    run_dir = Path(run_dir)
    diag = _read_table(run_dir / "diag.csv", DIAG_COLUMNS)
    outputs = [_render_diagnostics(run_dir, diag)]
    warnings: list[str] = []
    snap_paths = sorted(run_dir.glob("snap_*.csv"))
    if snap_paths:
        snaps = [_read_table(p, SNAPSHOT_COLUMNS) for p in snap_paths]
        if len({s.shape[0] for s in snaps}) > 1:
            raise RenderError("snapshots disagree on node count")
        outputs.append(_render_interface(run_dir, snaps))
        outputs.append(_render_sigma(run_dir, snaps))
    else:
        warnings.append("no snapshots found; skipping interface.png and sigma_heatmap.png")
    return RenderResult(tuple(outputs), DIAG_COLUMNS[1:], tuple(warnings))
