"""Computation services."""
