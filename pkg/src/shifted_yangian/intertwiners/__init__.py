"""Baxter operators, R-matrices and truncation."""
