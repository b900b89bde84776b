"""Hierarchical proof checking."""
