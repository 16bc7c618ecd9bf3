"""Exact and pointwise computations for Poisson submanifolds, submersions and their examples."""
from .report import VERSION as __version__

__all__ = ["__version__"]
