import numpy as np
import pytest

from coherent_propagators.classical_catmap import CatMap
from coherent_propagators.quadratic_flows import QuadraticHamiltonian


@pytest.fixture
def cat():
    return CatMap()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def harmonic():
    return QuadraticHamiltonian.harmonic()


@pytest.fixture
def inverted():
    return QuadraticHamiltonian.inverted()


@pytest.fixture
def figure2_points():
    return (0.4, 0.3), (0.2, 0.3)
