"""Charts for prdm CSV tables: utility sweeps and residual curves."""

from .charts import (
    extract_series,
    plot_residuals,
    plot_sweep,
    render_residuals,
    render_sweep,
)
from .tables import (
    ResidualTable,
    SweepRow,
    SweepTable,
    TableError,
    load_residuals,
    load_sweep,
)

__all__ = [
    "ResidualTable",
    "SweepRow",
    "SweepTable",
    "TableError",
    "extract_series",
    "load_residuals",
    "load_sweep",
    "plot_residuals",
    "plot_sweep",
    "render_residuals",
    "render_sweep",
]

__version__ = "0.1.0"
