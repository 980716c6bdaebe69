import numpy as np
import pytest

from geojsd import DiscreteDensity


@pytest.fixture
def rng():
    return np.random.default_rng(241105)


@pytest.fixture
def pair_factory():
    """Strictly positive normalized pairs on a shared support."""

    def make(rng, size, floor=0.05):
        w1 = rng.uniform(floor, 1.0, size)
        w2 = rng.uniform(floor, 1.0, size)
        return (DiscreteDensity.probability(w1 / w1.sum()),
                DiscreteDensity.probability(w2 / w2.sum()))

    return make


@pytest.fixture
def simple_pair():
    return (DiscreteDensity.probability([0.5, 0.5]),
            DiscreteDensity.probability([0.25, 0.75]))
