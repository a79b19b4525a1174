"""Shared fixtures for unit tests.

Unit tests stay small: short horizons, few scenarios, no full experiments.
"""

import pytest
from pypegasus import clear_default_workers, set_run_id
from pypegasus.envs.gridworld import build_gridworld


@pytest.fixture(autouse=True)
def reset_default_workers():
    """Reset the default worker count and run ID before and after each test."""
    clear_default_workers()
    set_run_id(None)
    yield
    clear_default_workers()
    set_run_id(None)


@pytest.fixture(scope="session")
def gridworld():
    """The normal gridworld model (gamma 0.99)."""
    return build_gridworld()
