import numpy as np
import pytest

from wanderlab import modelmap


@pytest.fixture(scope="session")
def model_params():
    """The reference construction; calibration is cached across the session."""
    return modelmap.generate_params(2.5, 1e-3, 1.0, stages=2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
