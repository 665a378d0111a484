"""Chart building and rendering, a strict consumer of loaded tables.

Nothing here recomputes mechanism values: every plotted number comes
from the CSV, converted to float exactly once at the matplotlib
boundary. Styling is pinned so that the same table always produces the
same figure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .tables import ResidualTable, SweepTable, load_residuals, load_sweep

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "lines.linewidth": 1.6,
    "lines.markersize": 4.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "prdm-plots",
    "font.family": "DejaVu Sans",
}

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def plot_sweep(table: SweepTable) -> Figure:
    """One marker-dotted line per scenario, legend from scenario names."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for index, scenario in enumerate(table.scenarios):
            points = table.series(scenario)
            ax.plot(
                [float(d) for d, _ in points],
                [float(u) for _, u in points],
                marker="o",
                color=_COLORS[index % len(_COLORS)],
                label=scenario,
            )
        ax.set_xlabel("delta (capacity reported through the fake child)")
        ax.set_ylabel("coalition utility")
        ax.legend(title="scenario")
        fig.tight_layout()
    return fig


def plot_residuals(table: ResidualTable) -> Figure:
    """Residual budget against the capacity scale, log-scaled x."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(
            [float(s) for s, _ in table.points],
            [float(r) for _, r in table.points],
            marker="o",
            color=_COLORS[0],
        )
        if len(table.points) > 1 and all(s > 0 for s, _ in table.points):
            ax.set_xscale("log")
        ax.set_xlabel("capacity scale")
        ax.set_ylabel("residual budget")
        fig.tight_layout()
    return fig


def _save(fig: Figure, out_path) -> None:
    out = str(out_path)
    # save under the pinned style too: svg.hashsalt keeps element ids
    # stable and dropping the Date makes identical tables give identical
    # bytes
    with plt.rc_context(_STYLE):
        if out.endswith(".svg"):
            fig.savefig(out, metadata={"Date": None})
        else:
            fig.savefig(out)
    plt.close(fig)


def render_sweep(csv_path, out_path) -> Figure:
    """Load a sweep CSV and write its chart; returns the figure."""
    fig = plot_sweep(load_sweep(csv_path))
    _save(fig, out_path)
    return fig


def render_residuals(csv_path, out_path) -> Figure:
    """Load a residual CSV and write its chart; returns the figure."""
    fig = plot_residuals(load_residuals(csv_path))
    _save(fig, out_path)
    return fig


def extract_series(fig: Figure) -> Tuple[Tuple[str, Tuple[Tuple[float, float], ...]], ...]:
    """Pull (label, points) back out of a figure's lines, for verification."""
    ax = fig.axes[0]
    return tuple(
        (line.get_label(), tuple(map(tuple, line.get_xydata())))
        for line in ax.get_lines()
    )
