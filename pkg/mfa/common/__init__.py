"""Algebraic kernel: fields, polynomials and the two algebras."""
