"""Render publication-style figures from wgss result tables.

This package deliberately depends only on the documented table file format
(JSON metadata line, column names, units, full-precision CSV rows), not on
the simulator itself.
"""

__version__ = "0.1.0"
