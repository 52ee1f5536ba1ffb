"""Volatility models: Student-t kernel, single-regime GARCH family, MRS-GARCH."""
