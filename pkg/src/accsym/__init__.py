"""Symbolic workbench for almost-cosymplectic-contact structures and their duals."""

from .chart import Chart, Point
from .symexpr import Policy, parse_expr

__all__ = ["Chart", "Point", "Policy", "parse_expr"]
__version__ = "0.1.0"
