"""Output exporters."""
