"""Exact divisor calculus on blow-ups of the plane and a verifier for a
non-full exceptional collection of maximal length on ten points."""

__version__ = "0.1.0"
