"""
Shared pytest configuration: path-based markers, environment and common domain fixtures.
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to path so `src` imports resolve
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.domain.services import closed_form_spectra, discrete_laplacian  # noqa: E402
from src.domain.value_objects import DomainSpec  # noqa: E402


# Test categorization helpers
def categorize_test_by_path(nodeid):
    """Categorize test based on its path."""
    path = "/" + nodeid.split("::")[0]
    if '/unit/' in path:
        return 'unit'
    elif '/integration/' in path:
        return 'integration'
    elif '/e2e/' in path:
        return 'e2e'
    else:
        return 'unknown'


def pytest_collection_modifyitems(session, config, items):
    """Add type and layer markers based on the test path"""
    for item in items:
        category = categorize_test_by_path(item.nodeid)
        if category != 'unknown':
            item.add_marker(getattr(pytest.mark, category))

        if '/domain/' in item.nodeid:
            item.add_marker(pytest.mark.domain)
        elif '/application/' in item.nodeid:
            item.add_marker(pytest.mark.application)
        elif '/infrastructure/' in item.nodeid:
            item.add_marker(pytest.mark.infrastructure)
        elif 'e2e' in item.nodeid:
            item.add_marker(pytest.mark.adapters)


# Environment setup
@pytest.fixture(autouse=True)
def setup_test_environment(monkeypatch):
    """Keep runs independent of the caller's environment."""
    monkeypatch.delenv("MEANSPEC_THREADS", raising=False)
    monkeypatch.delenv("MEANSPEC_MC_CHUNK", raising=False)
    yield


# ============================================================================
# Domain fixtures
# ============================================================================

@pytest.fixture(scope="session")
def unit_square():
    return DomainSpec.box([1.0, 1.0])


@pytest.fixture(scope="session")
def unit_disk():
    return DomainSpec.disk(1.0)


@pytest.fixture(scope="session")
def square_spectrum():
    """First 200 exact modes of the unit square"""
    return closed_form_spectra.enumerate_box([1.0, 1.0], 200)


@pytest.fixture(scope="session")
def interval_spectrum():
    """First 1000 exact modes of the unit interval"""
    return closed_form_spectra.enumerate_box([1.0], 1000)


@pytest.fixture(scope="session")
def coarse_square_mask():
    """Unit square rasterized at h = 1/16 (15 x 15 inside nodes)"""
    return discrete_laplacian.rasterize(DomainSpec.box([1.0, 1.0]), 1.0 / 16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
