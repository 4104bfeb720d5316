"""Shared test utilities."""
import numpy as np

from hamid import HamiltonianPair


def haar_unitary(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pair(d, rng, scale=1.0):
    h0 = rng.normal(size=(d, d)) * scale
    h0 = 0.5 * (h0 + h0.T)
    h1 = rng.normal(size=(d, d)) * scale
    h1 = 0.5 * (h1 + h1.T)
    np.fill_diagonal(h1, 0.0)
    return HamiltonianPair(h0, h1)


def random_direction(d, rng):
    """Symmetric dH0 and symmetric zero-diagonal dH1 with unit-scale entries."""
    dh0 = rng.uniform(-1, 1, size=(d, d))
    dh0 = 0.5 * (dh0 + dh0.T)
    dh1 = rng.uniform(-1, 1, size=(d, d))
    dh1 = 0.5 * (dh1 + dh1.T)
    np.fill_diagonal(dh1, 0.0)
    return dh0, dh1


SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
