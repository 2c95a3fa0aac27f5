"""Exact simulation of distances on branched masures over Kac-Moody root data."""

__version__ = "0.1.0"
