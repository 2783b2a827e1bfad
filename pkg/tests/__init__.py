"""Tests for the shifted Yangian toolkit."""
