"""Computational lab for Hecke-eigenvalue combinatorics, local L-factors,
Kloosterman/Kuznetsov numerics and Monte Carlo fractional-moment experiments."""

__version__ = "0.1.0"

from . import hecke, kloosterman, pipeline, primes, random_model, satake, transforms

__all__ = [
    "hecke",
    "satake",
    "kloosterman",
    "transforms",
    "random_model",
    "pipeline",
    "primes",
    "__version__",
]
