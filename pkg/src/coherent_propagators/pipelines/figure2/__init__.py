"""Relative amplitude errors of the semiclassical formulas as N grows"""

from .pipeline import create_pipeline

__all__ = ["create_pipeline"]

__version__ = "0.1"
