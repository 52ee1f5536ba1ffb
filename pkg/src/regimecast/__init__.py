"""Volatility forecasting with GARCH-family and regime switching GARCH models."""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("regimecast")
except importlib.metadata.PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"
