"""Integration tests for the command line and full-size experiment runs."""
