"""Exact enumerative checks for a Hurwitz-type divisor on Prym moduli."""

from __future__ import annotations

__version__ = "0.1.0"
