import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_gram(rng, n=25, rank=2, scale=1.0):
    c = rng.normal(size=(n, rank)) * scale
    return c @ c.T


def random_gram_stack(rng, length, n=25, rank=2, scale=1.0):
    c = rng.normal(size=(length, n, rank)) * scale
    return np.einsum("fnr,fmr->fnm", c, c)
