"""Klein Verification Toolkit."""
