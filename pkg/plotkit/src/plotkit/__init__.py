"""Sweep-CSV plotting for corruption-budget comparison figures."""

__version__ = "0.1.0"

from .render import CSV_SCHEMA_V1, PlotSpec, RenderResult, SchemaError, read_sweep, render
