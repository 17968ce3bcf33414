"""Riccati and Abel chains: construction, nonlocal symmetries, reductions and solutions."""

__version__ = "0.1.0"
