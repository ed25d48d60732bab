"""One-clean-qubit simulator and experiment workbench."""
