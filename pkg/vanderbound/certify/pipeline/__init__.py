"""Runners that turn node sets into stability reports."""
