"""Measurement gadgets for generalised bicycle quantum LDPC codes."""

__version__ = "0.1.0"
