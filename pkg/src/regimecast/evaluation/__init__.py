"""Loss functions, directional tests and model rankings."""
