"""Data models for wire formats and reports."""
