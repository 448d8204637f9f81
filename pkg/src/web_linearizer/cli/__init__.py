"""Command-line interface for the web linearizer."""
