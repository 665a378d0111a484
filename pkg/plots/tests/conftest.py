from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def sweep_csv() -> Path:
    return DATA / "reference_sweep.csv"


@pytest.fixture
def residuals_csv() -> Path:
    return DATA / "reference_residuals.csv"
