import numpy as np
import pytest

from data.dataset import Dataset
from data.synthetic import generate_synthetic
from lstm.params import init_params


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def synthetic_year():
    """Eight households over calendar year 2015, two per cluster."""
    return generate_synthetic(seed=7, consumers=8, days=365, start="2015-01-01")


@pytest.fixture(scope="session")
def year_dataset(synthetic_year):
    return Dataset.from_synthetic(synthetic_year)


@pytest.fixture(scope="session")
def synthetic_month():
    return generate_synthetic(seed=3, consumers=4, days=40, start="2015-01-01")


@pytest.fixture
def small_params():
    return init_params(3, 2, seed=11)
