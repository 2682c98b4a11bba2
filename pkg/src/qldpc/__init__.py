"""Quantum LDPC codes: construction, BP-OSD decoding, and WER simulation."""

__version__ = "0.1.0"
