"""Logging setup shared by the command line, the batch script and the library.

Records always go to stderr. Standard output belongs to circuit text and
JSON results, so piping ``dqc1 gadget and | dqc1 run -`` stays clean at any
verbosity.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# -v, -vv on the command line
VERBOSITY_LEVELS = {1: "INFO", 2: "DEBUG"}


def level_for_verbosity(verbose: int, default: str) -> str:
    """Level name for a count of -v flags; zero keeps ``default``."""
    if verbose <= 0:
        return default
    return VERBOSITY_LEVELS.get(verbose, "DEBUG")


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[Path] = None,
    format_string: Optional[str] = None
) -> logging.Logger:
    """Configure the root logger with one stderr handler and an optional file.

    Calling it again replaces the previous handlers, so the CLI can raise the
    level after parsing its flags. Python ``warnings`` (numpy overflow,
    scipy deprecations) are routed into the same handlers.

    Args:
        level: Level name; unknown names fall back to WARNING
        log_file: Extra file to append records to (parent directories are created)
        format_string: Record format; DEFAULT_FORMAT when omitted

    Returns:
        The configured root logger
    """
    numeric_level = getattr(logging, level.upper(), logging.WARNING)
    formatter = logging.Formatter(format_string or DEFAULT_FORMAT, datefmt=DATE_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    for handler in handlers:
        handler.setLevel(numeric_level)
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)

    logging.captureWarnings(True)
    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Module logger; configuration is inherited from the root logger."""
    return logging.getLogger(name)


# LOG_LEVEL wins over the settings default
setup_logging(level=os.getenv("LOG_LEVEL", "WARNING"))
