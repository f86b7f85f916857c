"""Figure rendering for mzherald CSV data sets."""

from .recipes import FIGURE_IDS, SCHEMAS, FigureRecipe, SchemaError, load_table
from .render import HEATMAP_RANGE, render

__all__ = ["FIGURE_IDS", "SCHEMAS", "FigureRecipe", "SchemaError",
           "load_table", "HEATMAP_RANGE", "render"]

__version__ = "0.1.0"
