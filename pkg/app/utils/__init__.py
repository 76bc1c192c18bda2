"""Hashing, rendering and decimal formatting helpers."""
