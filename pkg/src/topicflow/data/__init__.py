"""Bundled stop-word list and synthetic fixtures."""
