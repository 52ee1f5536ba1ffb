"""Maximum likelihood estimation of the volatility models."""
