import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import pytest

from config.settings import reset_settings
from walk.graph import ChiralCompleteGraph
from walk.spectrum import walk_spectrum

LARGE_N = 1023
RUNTIME_THETAS = (0.0, 0.4, 0.8, 1.2, 1.4)


@pytest.fixture(scope="session")
def large_spectra():
    """Walk spectra at n = 1023 for the phases used in the runtime checks."""
    return {theta: walk_spectrum(ChiralCompleteGraph(LARGE_N, theta)) for theta in RUNTIME_THETAS}


@pytest.fixture
def clean_settings(monkeypatch):
    for key in ("CHIRALWALK_THREADS", "CHIRALWALK_OUTPUT_DIR", "CHIRALWALK_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()
