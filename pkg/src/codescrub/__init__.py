"""Semantics-preserving code refactoring with contamination measurement."""

__version__ = "0.1.0"
