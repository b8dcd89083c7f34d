"""Graded character rings of finite groups: gamma filtrations, saturation,
multiplicative transfer and G-set bundles."""

__version__ = "0.1.0"
