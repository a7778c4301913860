"""Unit tests for entrolab."""
