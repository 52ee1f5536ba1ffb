"""Handles the configuration for the app."""
