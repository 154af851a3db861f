"""Exact simulator and checks for crash-tolerant gathering of oblivious robots."""

__version__ = "0.1.0"
