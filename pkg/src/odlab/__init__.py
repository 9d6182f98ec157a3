"""Oriented 4-regular maps: invariants, reductions, scheme enumeration and knot diagrams."""

__version__ = "0.1.0"
