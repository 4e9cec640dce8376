"""Exact enumeration, bridge decompositions and surgery checks for self-avoiding walks."""

__version__ = "0.1.0"
