"""Exact homological algebra over finite-dimensional algebras."""
