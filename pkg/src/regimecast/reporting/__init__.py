"""Report tables and their file exporters."""
