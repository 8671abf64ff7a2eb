"""Executable distal regularity on finite instances."""
__version__ = "0.1.0"
