"""Utility modules for regimecast."""
