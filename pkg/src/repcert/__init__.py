"""Exact certificates for surface group representations in PSL2."""

__version__ = "0.1.0"
