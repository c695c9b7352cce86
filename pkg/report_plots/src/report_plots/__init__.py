"""Figures from nlskdv run outputs; reads only the CSV/JSON contract."""

from .frames import MissingColumnError, SeriesFormatError, SeriesFrame, load_json, load_series
from .render import render_growth, render_timeseries

__version__ = "0.1.0"

__all__ = [
    "MissingColumnError",
    "SeriesFormatError",
    "SeriesFrame",
    "load_json",
    "load_series",
    "render_growth",
    "render_timeseries",
]
