"""Multi-step variance forecasts and the rolling-origin harness."""
