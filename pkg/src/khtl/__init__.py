"""Khovanov complexes over the Temperley-Lieb cobordism category."""

__version__ = "0.1.0"
