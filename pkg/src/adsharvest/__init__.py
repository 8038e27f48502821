"""Entanglement harvesting by Unruh-DeWitt detectors in global AdS4."""

__version__ = "0.1.0"
