"""Shared test fixtures."""

import os
from collections.abc import Generator
from pathlib import Path

import numpy as np
import pytest

import finsler_lab.config as config_module
from finsler_lab.catalog import FinslerModel, build_model, load_model_spec
from finsler_lab.jets import ChartPoint

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"


def load(name: str) -> FinslerModel:
    """Build one of the sample models shipped in models/."""
    path = next(MODELS_DIR.glob(f"{name}.*"))
    return build_model(load_model_spec(path), n_samples=20)


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch) -> Generator[None, None, None]:
    """Keep a developer's .env and FINSLER_LAB_* variables out of the tests."""
    monkeypatch.setattr(config_module, "_ENV_FILE", tmp_path / ".env")
    for var in [k for k in os.environ if k.startswith("FINSLER_LAB_")]:
        monkeypatch.delenv(var)
    yield


@pytest.fixture
def models_dir() -> Path:
    return MODELS_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def minkowski() -> FinslerModel:
    return load("minkowski")


@pytest.fixture(scope="session")
def schwarzschild() -> FinslerModel:
    return load("schwarzschild")


@pytest.fixture(scope="session")
def randers() -> FinslerModel:
    return load("randers")


@pytest.fixture(scope="session")
def bogoslovsky() -> FinslerModel:
    return load("bogoslovsky")


@pytest.fixture(scope="session")
def mth_root() -> FinslerModel:
    return load("mth_root")


@pytest.fixture(scope="session")
def signature_reversed() -> FinslerModel:
    return load("signature_reversed")


@pytest.fixture(scope="session")
def frw() -> FinslerModel:
    return load("frw")


@pytest.fixture
def randers_point() -> ChartPoint:
    return ChartPoint.of((0.1, -0.2, 0.3, 0.0), (1.0, 0.2, -0.1, 0.05))


@pytest.fixture
def schwarzschild_point() -> ChartPoint:
    return ChartPoint.of((0.0, 10.0, 1.2, 1.0), (1.2, 0.1, 0.01, 0.02))
