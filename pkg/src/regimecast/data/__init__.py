"""Price ingest, return construction and sample splits."""
