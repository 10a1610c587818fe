import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from explasso import validate_dataset


def make_problem(seed, n=50, p=20, s=5, noise_sd=1.0, outliers=0):
    """Random sparse regression instance; returns (dataset, beta_true)."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p))
    beta = np.zeros(p)
    sup = rng.choice(p, size=s, replace=False)
    beta[sup] = rng.choice([-1.0, 1.0], size=s) * rng.uniform(0.5, 2.0, size=s)
    y = x @ beta + noise_sd * rng.standard_normal(n)
    if outliers:
        idx = rng.choice(n, size=outliers, replace=False)
        y[idx] += rng.choice([-1.0, 1.0], size=outliers) * rng.uniform(8, 12, outliers)
    return validate_dataset(x, y), beta


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
