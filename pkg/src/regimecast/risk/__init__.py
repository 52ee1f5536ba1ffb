"""Value-at-Risk forecasts and coverage backtests."""
