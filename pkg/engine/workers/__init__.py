"""Frame worker pool."""
