"""Simulation of the volatility models and brute-force forecast oracles."""
