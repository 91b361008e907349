"""Hierarchical multi-label classification with a penalty-based BCE loss."""

__version__ = "0.1.0"
