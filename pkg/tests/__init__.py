"""Tests for mfa."""
