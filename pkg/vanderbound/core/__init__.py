"""Numerical core: monomial bases, projection geometry, Lagrange construction, spectra."""
