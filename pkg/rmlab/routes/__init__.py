"""Command handlers for the rmlab command line."""
