import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from raa_nullsteer.steering import ArrayConfig, Cosine, Isotropic  # noqa: E402


@pytest.fixture
def iso8():
    return ArrayConfig(8, 0.5, Isotropic())


@pytest.fixture
def cos8():
    return ArrayConfig(8, 0.5, Cosine(0.5))


@pytest.fixture
def fig3_interferers():
    return tuple(np.deg2rad([-10.0, 30.0, 60.0, 115.0]))
