"""Exact 2-parameter Green functions for finite groups of type A, with a
brute-force counting oracle and a verified corpus of published tables."""

__version__ = "0.1.0"
