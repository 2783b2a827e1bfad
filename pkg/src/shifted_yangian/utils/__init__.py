"""Helpers: exact linear algebra, interpolation, serialization and path safety."""
