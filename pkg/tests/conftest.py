import numpy as np
import pytest

from qwcomplexity import default_basis, default_structure_constants


@pytest.fixture(scope="session")
def basis():
    return default_basis()


@pytest.fixture(scope="session")
def sc():
    return default_structure_constants()


@pytest.fixture()
def rng():
    return np.random.default_rng(42)


def random_unitary(rng, n=4):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
