"""Planar harmonic mappings f = h + conj(g) on the unit disk."""

from .catalog import CatalogEntry, MapName, make_named, parse_entry
from .config import Settings, load_settings
from .convolution import build_expression, hadamard
from .errors import HarmonicMapError
from .harmonic_map import HarmonicMap, evaluate_f
from .series import TruncatedSeries

__all__ = [
    "CatalogEntry",
    "HarmonicMap",
    "HarmonicMapError",
    "MapName",
    "Settings",
    "TruncatedSeries",
    "build_expression",
    "evaluate_f",
    "hadamard",
    "load_settings",
    "make_named",
    "parse_entry",
]
