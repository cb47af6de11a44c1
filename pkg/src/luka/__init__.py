"""Exact coherence, states and provability for Łukasiewicz logic."""
from .formula import Formula, FormulaSyntaxError, evaluate, parse, power, render

__all__ = ["Formula", "FormulaSyntaxError", "evaluate", "parse", "power", "render"]
__version__ = "0.1.0"
