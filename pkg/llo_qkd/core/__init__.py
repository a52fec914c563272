"""Core key-rate model."""
