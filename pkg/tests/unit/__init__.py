"""Unit tests for wavecv components."""
