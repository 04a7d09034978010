"""Certified experiments on curve graphs, handlebody disk sets, and
Heegaard-splitting distances of closed orientable surfaces."""

__version__ = "0.1.0"
