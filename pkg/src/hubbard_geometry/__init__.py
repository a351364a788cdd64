"""Algebraic geometry of the Shastry Lax operator and R-matrix of the 1D Hubbard model."""

from __future__ import annotations

__version__ = "0.1.0"
