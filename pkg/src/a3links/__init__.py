"""Exact classification of strongly exceptional Legendrian A3 links."""

__version__ = "0.1.0"
