"""Secure key rates for local-local-oscillator CV-QKD under trusted phase noise models."""

__version__ = "0.1.0"
