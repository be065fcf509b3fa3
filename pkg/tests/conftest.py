import math
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from estimation.spectrum import SpectralDecomposition, make_initial_state, tfim_spectral_model  # noqa: E402
from utils.cache_manager import get_spectrum_cache  # noqa: E402


@pytest.fixture(scope="session")
def tfim_model():
    return tfim_spectral_model(8, 4.0)


@pytest.fixture(scope="session")
def tfim_state(tfim_model):
    """TFIM(8, 4) ground state target with overlap 0.8 and random residual weights."""
    return make_initial_state(tfim_model.phases, tfim_model.ground_index, 0.8, seed=1234)


@pytest.fixture
def one_hot():
    def build(phase: float) -> SpectralDecomposition:
        return SpectralDecomposition(phases=[phase], weights=[1.0])
    return build


@pytest.fixture
def small_state():
    return SpectralDecomposition(phases=[0.3, -1.1, 2.0], weights=[0.8, 0.15, 0.05])


@pytest.fixture
def random_phases():
    rng = np.random.default_rng(2024)
    return rng.uniform(-math.pi, math.pi, size=20)


@pytest.fixture
def fresh_cache():
    cache = get_spectrum_cache()
    cache.invalidate_all()
    yield cache
    cache.invalidate_all()
