"""Algebraic fibrations of right-angled Coxeter groups: move systems,
flag-complex link homology and exhaustive orbit verification."""

__version__ = "0.1.0"
