"""Command line interface for regimecast."""
