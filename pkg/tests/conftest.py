"""Shared fixtures."""

from __future__ import annotations

import random
from collections.abc import Callable
from pathlib import Path

import pytest

from bredon_obstruction import zmodule
from bredon_obstruction.loader import Instance
from factories import GOLDEN, INSTANCES, load


@pytest.fixture(autouse=True)
def verify_decompositions(monkeypatch: pytest.MonkeyPatch) -> None:
    """Every Smith decomposition computed in a test is re-verified."""
    monkeypatch.setattr(zmodule, "VERIFY_DECOMPOSITIONS", True)


@pytest.fixture
def instances_dir() -> Path:
    return INSTANCES


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def instance() -> Callable[[str], Instance]:
    """Load a curated instance by stem, e.g. ``instance("point")``."""
    return load


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
