"""Exact arithmetic for q-deformed differential calculi on the light cone."""

__version__ = "0.1.0"
