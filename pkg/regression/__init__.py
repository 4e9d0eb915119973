"""Regression runs against the reference table."""
