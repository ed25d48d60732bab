"""User-facing messages and error strings.

This module centralizes all user-facing messages printed by the command line
so wording stays consistent between subcommands.
"""

# Error Messages
ERROR_USAGE = "usage error: {detail}"
ERROR_INPUT_FILE = "input error in {path}: {detail}"
ERROR_SOURCE_POSITION = "{path}:{line}:{column}: {kind}: {message}"
ERROR_TOLERANCE = "tolerance check failed: {detail}"
ERROR_PROMISE_VIOLATED = "promise violated: |beta| = {beta:.6g} < 1/p = {bound:.6g}"
ERROR_INPUT_REQUIRED = "circuit takes {n} input bit(s); pass --input"

# Status Messages
STATUS_FALLBACK_DENSE = "Heisenberg engine gave up ({reason}); falling back to dense engine"
STATUS_SEED_CHOSEN = "no --seed given; using seed {seed}"
STATUS_REPORT_WRITTEN = "report written to {path}"

# Format Strings
FORMAT_BETA_LABEL = "beta"
FORMAT_PROBABILITY_LABEL = "P(0)"
FORMAT_DECISION_LABEL = "decision"
FORMAT_UNDEFINED = "undefined"

# Default Values
DEFAULT_STDIN_NAME = "<stdin>"
