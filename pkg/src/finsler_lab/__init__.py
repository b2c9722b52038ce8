"""finsler-lab: a numerical laboratory for Finsler spacetimes."""

__version__ = "0.1.0"
