"""Tests for neutral4."""
