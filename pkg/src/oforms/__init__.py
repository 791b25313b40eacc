"""Exact reduction and sum-of-squares toolkit for quadratic forms over
totally real number fields of class number 1."""

__version__ = "0.1.0"
