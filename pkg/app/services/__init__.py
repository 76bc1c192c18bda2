"""Verification services: exact algebra, groups, characters and suites."""
