import numpy as np
import pytest
from hypothesis import settings

from bosonbunch import linalg

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BACKENDS = ["python"] + (["compiled"] if linalg._compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = linalg.backend_name()
    linalg.use_backend(request.param)
    yield request.param
    linalg.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def beamsplitter():
    return np.array([[1, 1], [1, -1]]) / np.sqrt(2)
