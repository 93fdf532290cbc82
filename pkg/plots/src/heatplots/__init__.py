"""Post-hoc figure rendering for heatlab result files.

Consumes only the documented CSV/JSON artifact layouts; never imports the
solver.
"""

from .figures import KINDS, FigureRequest, build_figure, render
from .schemas import SchemaError

__all__ = ["KINDS", "FigureRequest", "SchemaError", "build_figure", "render"]
