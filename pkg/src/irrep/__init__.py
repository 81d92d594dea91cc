"""Irreducible matrix representations of finitely presented algebras."""
