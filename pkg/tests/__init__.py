"""Tests for lingforge."""
