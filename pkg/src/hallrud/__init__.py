"""Exact Hall algebra of the Rudakov quiver over finite fields and the shifted quantum affine sl2."""

from __future__ import annotations

__version__ = "0.1.0"
