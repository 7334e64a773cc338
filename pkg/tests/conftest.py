# tests/conftest.py
# -*- coding: utf-8 -*-
import os
import sys

import pytest

# Mismo fix de sys.path que aplican los scripts
repo_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.config import reset_settings  # noqa: E402
from common.utils import make_rng  # noqa: E402
from gossip.quantizer import Quantizer  # noqa: E402


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Los GOSSIP_* del entorno del desarrollador no deben filtrarse en los tests."""
    for key in list(os.environ):
        if key.startswith("GOSSIP_"):
            monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def unit_quantizer():
    """Δ = 1 sobre [0, 3] (niveles 0, 1, 2, 3)."""
    return Quantizer(bits=2, range_min=0.0, range_max=3.0)
