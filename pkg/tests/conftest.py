"""Shared fixtures."""

from pathlib import Path

import numpy as np
import pytest
import structlog

from restricted_gamma.ingest import load_csv
from restricted_gamma.models import Dataset
from restricted_gamma.regression import fit_mle

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
BODYFAT_CSV = DATA_DIR / "bodyfat.csv"
BODYFAT_COVARIATES = [
    "age",
    "waistcirc",
    "hipcirc",
    "elbowbreadth",
    "kneebreadth",
    "anthro3a",
    "anthro3b",
    "anthro3c",
    "anthro4",
]


@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def gamma_dataset() -> Dataset:
    """Intercept plus two covariates, ζ = 0.25, n = 80."""
    gen = np.random.default_rng(7)
    n = 80
    X = np.column_stack([np.ones(n), gen.normal(size=n), gen.normal(size=n)])
    beta = np.array([0.5, 0.3, -0.2])
    mu = np.exp(X @ beta)
    zeta = 0.25
    y = gen.gamma(1.0 / zeta, mu * zeta)
    return Dataset(X, y, zeta, covariate_names=("(Intercept)", "a", "b"))


@pytest.fixture
def gamma_fit(gamma_dataset):
    return fit_mle(gamma_dataset)


@pytest.fixture
def bodyfat_path() -> Path:
    if not BODYFAT_CSV.exists():
        pytest.skip("data/bodyfat.csv not present (see data/README.md)")
    return BODYFAT_CSV


@pytest.fixture
def bodyfat_data(bodyfat_path) -> Dataset:
    return load_csv(bodyfat_path, "DEXfat", BODYFAT_COVARIATES, zeta=0.0097)
