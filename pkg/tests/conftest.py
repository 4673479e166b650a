import numpy as np
import pytest

from pagecurve.haar import SeededStream, _raw_haar_matrix


@pytest.fixture
def haar_matrix():
    """Raw Haar matrix factory keyed by (seed, index)."""

    def make(n, seed=0, index=0):
        return _raw_haar_matrix(n, SeededStream(seed, index).generator())

    return make


def dense_reduced_covariance(u, s_values, k):
    """Independent oracle: full eta conjugation and explicit index slicing."""
    n = u.shape[0]
    z = np.exp(2.0 * np.asarray(s_values, dtype=float))
    sigma0 = np.diag(np.concatenate([z, 1.0 / z]))
    eta = np.block([[u.real, u.imag], [-u.imag, u.real]])
    full = eta @ sigma0 @ eta.T
    idx = list(range(k)) + list(range(n, n + k))
    return full[np.ix_(idx, idx)]
