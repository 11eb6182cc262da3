import numpy as np
import pytest

EPS = np.finfo(float).eps


def gauss(rng, shape, complex_=True):
    z = rng.standard_normal(shape)
    if complex_:
        z = z + 1j * rng.standard_normal(shape)
    return z


def factor_of_rank(rng, n, rank, cols, complex_=True):
    return gauss(rng, (n, rank), complex_) @ gauss(rng, (rank, cols), complex_)


def psd(rng, n, rank=None, complex_=True):
    G = gauss(rng, (n, rank or n), complex_)
    return G @ G.conj().T


def correlation(rng, n, rank=None, complex_=False):
    M = psd(rng, n, rank, complex_)
    s = np.sqrt(np.diagonal(M).real)
    return M / np.outer(s, s)


def min_eig(X):
    """Oracle: smallest eigenvalue of the Hermitian part of X."""
    X = np.asarray(X, dtype=complex)
    return float(np.linalg.eigvalsh((X + X.conj().T) / 2)[0])


def eig_scale(X):
    X = np.asarray(X, dtype=complex)
    w = np.linalg.eigvalsh((X + X.conj().T) / 2)
    return max(1.0, float(np.max(np.abs(w))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
