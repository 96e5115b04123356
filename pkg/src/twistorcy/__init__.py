"""Exact toric and combinatorial tools for resolving orbifold twistor spaces."""

__version__ = "0.1.0"
