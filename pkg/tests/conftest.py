"""Shared scenarios."""

import pytest

from llo_qkd.core import params


@pytest.fixture
def table1_config():
    """Pilot-tone experiment at 25 km with measured xi_tot = 0.056."""
    return params.table1_config()


@pytest.fixture
def fig2_config():
    """Simulation regime of the distance curves at 25 km."""
    return params.fig2_config()
