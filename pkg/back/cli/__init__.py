"""Command-line interface for rotodo."""
