"""Exact max-plus polytropes and the fan of linearity of the polytrope map."""

__version__ = "0.1.0"
