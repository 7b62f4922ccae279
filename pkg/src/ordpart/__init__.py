"""Polarised partition relations for ordinals and countable order types, at desk scale."""

__version__ = "0.1.0"
