"""Integration tests for wavecv."""
