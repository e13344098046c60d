import numpy as np
import pytest

from orbitsum.linalg import RandomStream


@pytest.fixture
def stream():
    return RandomStream(seed=12345)


def random_hermitian(gen: np.random.Generator, n: int) -> np.ndarray:
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    return 0.5 * (z + z.conj().T)
