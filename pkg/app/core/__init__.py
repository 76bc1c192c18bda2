"""Settings and the toolkit exception hierarchy."""
