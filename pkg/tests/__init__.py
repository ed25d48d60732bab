"""Test suite for the one-clean-qubit workbench."""
