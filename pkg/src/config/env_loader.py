"""Centralized environment variable loading utility.

Loads a ``.env`` file so that ``DQC1_*`` overrides (dense cap, term cap,
tolerances) can live next to a checkout instead of in the shell profile.
"""

from pathlib import Path
from typing import Optional

from dotenv import load_dotenv


def load_environment_variables(project_dir: Optional[Path] = None) -> bool:
    """Load environment variables from .env file.

    Checks for .env file in the project directory first, then in its parent.
    Variables already present in the environment are not overridden.

    Args:
        project_dir: Project root directory. If None, calculated from this file.

    Returns:
        True if a .env file was found and loaded
    """
    if project_dir is None:
        # src/config/env_loader.py -> project root
        project_dir = Path(__file__).parent.parent.parent

    for candidate in (project_dir / ".env", project_dir.parent / ".env"):
        if candidate.exists():
            load_dotenv(candidate, override=False)
            return True
    return False
