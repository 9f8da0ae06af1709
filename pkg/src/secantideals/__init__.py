"""Exact computations around equations of secant varieties of Segre products."""

__version__ = "0.1.0"
