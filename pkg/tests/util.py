"""Shared random generators for the test suite."""

import numpy as np

from normact import HamiltonianSpec


def rand_matrix(rng, n, scale=1.0):
    """Entries uniform in the complex square [-1, 1] x [-1, 1], scaled."""
    return scale * (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))


def rand_unitary(rng, n):
    """Haar-ish unitary by QR orthonormalization of a random matrix."""
    q, r = np.linalg.qr(rand_matrix(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_hermitian(rng, n, scale=1.0):
    m = rand_matrix(rng, n, scale)
    return 0.5 * (m + m.conj().T)


def rand_invertible(rng, n, scale=1.0):
    while True:
        m = rand_matrix(rng, n, scale)
        w = np.linalg.svd(m, compute_uv=False)
        if w[-1] > 1e-6 * w[0]:
            return m


def scaled_to_norm(m, target):
    return m * (target / np.linalg.norm(m, 2))


def rand_constant_spec(rng, max_norm=3.0, max_t=2.0):
    n = int(rng.integers(2, 7))
    h = scaled_to_norm(rand_matrix(rng, n), rng.uniform(0.1, max_norm))
    return HamiltonianSpec.constant(h, rng.uniform(0.1, max_t))


def rand_piecewise_spec(rng, segments=4, max_norm=3.0):
    n = int(rng.integers(2, 7))
    segs = [
        (rng.uniform(0.05, 0.5),
         scaled_to_norm(rand_matrix(rng, n), rng.uniform(0.1, max_norm)))
        for _ in range(segments)
    ]
    return HamiltonianSpec.piecewise_constant(segs)
