"""Pytest configuration and shared fixtures."""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

import numpy as np
import pytest

from src.config import settings as settings_module
from tests.test_fixtures import (
    AND_GADGET_TEXT,
    ENTANGLED_TEXT,
    MIXED_SELECTOR_TEXT,
)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-size runs (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def reset_settings():
    """Drop the cached Settings so env overrides in one test never leak into another."""
    settings_module._settings = None
    yield
    settings_module._settings = None


@pytest.fixture
def rng():
    """Deterministic generator for randomized loops."""
    return np.random.default_rng(20240601)


@pytest.fixture
def and_text():
    return AND_GADGET_TEXT


@pytest.fixture
def entangled_text():
    return ENTANGLED_TEXT


@pytest.fixture
def mixed_selector_text():
    return MIXED_SELECTOR_TEXT


@pytest.fixture
def circuit_file(tmp_path):
    """Write DSL text to a temporary .dqc1 file and return its path."""
    def _write(text: str, name: str = "circuit.dqc1") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
