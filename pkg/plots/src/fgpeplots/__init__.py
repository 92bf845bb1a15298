"""Figure generation for fgpe run artifacts.

Consumes the CSV schemas, JSON summaries, and raw field files that the
fgpe command line writes; never computes beyond axis transforms and never
writes back to its inputs.
"""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, FigureSpec, render
from .schemas import CSV_SCHEMAS, EmptyInputError, SchemaError, read_csv_columns, read_field
