"""HTTP routers for suites, fixtures, groups and constants."""
