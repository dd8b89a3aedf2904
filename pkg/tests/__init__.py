"""Test suite for wavecv."""
