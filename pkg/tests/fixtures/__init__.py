"""Shared test fixtures and independent reference implementations."""
