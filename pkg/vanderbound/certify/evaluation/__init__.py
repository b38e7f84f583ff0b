"""Report schema, suite aggregation and the exact oracle tier."""
