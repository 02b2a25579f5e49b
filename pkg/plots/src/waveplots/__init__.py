"""Post-hoc rendering of interface-dyn run directories.

Consumes only the CSV files a run leaves behind (diag.csv and the optional
snap_NNNNNN.csv snapshots) and writes three deterministic images next to
them: diagnostics.png, interface.png and sigma_heatmap.png.
"""
from .render import RenderError, RenderResult, render_run

__all__ = ["RenderError", "RenderResult", "render_run"]

__version__ = "0.1.0"
