"""Equivariant Bergman densities on model projective manifolds."""
