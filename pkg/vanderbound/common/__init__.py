"""Shared utilities for vanderbound runners."""
