"""Cartan data, rational functions, ℓ-weights and the shifted Yangian of sl₂."""
