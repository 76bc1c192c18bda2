"""Pydantic models for reports, fixtures and API responses."""
