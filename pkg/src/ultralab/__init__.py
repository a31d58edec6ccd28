"""Exact-arithmetic toolkit for Hausdorff-type metrics on finite ultrametric
models, metrics on maps and ball maps, and p-adic measures."""

__version__ = "0.1.0"
