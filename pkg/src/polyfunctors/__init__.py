"""Coherent functors over symmetric groups and strict polynomial functors."""
