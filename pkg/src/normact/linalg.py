"""Dense complex matrix kernel: norms, SVD, determinant, inverse, exponential.

All functions operate on square complex matrices passed as array-likes and
validated on entry (finite entries, square shape). They are pure and safe to
call concurrently.
"""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import SingularMatrix

# Relative singular-value floor below which a matrix is treated as
# non-invertible; keeps inverse-based bounds meaningful rather than noise.
COND_FLOOR = 1e-12


class NormKind(Enum):
    """Selector for the sub-multiplicative matrix norm used throughout.

    SPECTRAL (largest singular value) is the default everywhere; FROBENIUS
    (root sum of squared moduli) is the alternative. Both are unitarily
    invariant.
    """

    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


class SvdTriple(NamedTuple):
    """Singular value decomposition m = q @ diag(w) @ p^dagger.

    q, p are unitary; w holds the singular values sorted descending.
    """

    q: np.ndarray
    w: np.ndarray
    p: np.ndarray

    def compose(self) -> np.ndarray:
        """Rebuild the decomposed matrix."""
        return (self.q * self.w) @ self.p.conj().T


def as_matrix(m) -> np.ndarray:
    """Validate an array-like as a square, finite complex matrix.

    Returns a complex128 ndarray. Raises ValueError on non-square shape or
    non-finite entries.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def spectral_norm(m) -> float:
    """Largest singular value of m."""
    return float(np.linalg.norm(as_matrix(m), 2))


def frobenius_norm(m) -> float:
    """Root sum of squared entry moduli."""
    return float(np.linalg.norm(as_matrix(m), "fro"))


def max_abs_entry(m) -> float:
    """Largest entry modulus max_ij |m_ij|."""
    return float(np.abs(as_matrix(m)).max())


def matrix_norm(m, kind: NormKind = NormKind.SPECTRAL) -> float:
    """Dispatch to the norm selected by `kind`."""
    if kind is NormKind.SPECTRAL:
        return spectral_norm(m)
    if kind is NormKind.FROBENIUS:
        return frobenius_norm(m)
    raise ValueError(f"unknown norm kind: {kind!r}")


def svd(m) -> SvdTriple:
    """Full singular value decomposition of m as an SvdTriple."""
    q, w, vh = np.linalg.svd(as_matrix(m))
    return SvdTriple(q=q, w=w, p=vh.conj().T)


def det(m) -> complex:
    """Determinant via pivoted LU factorization."""
    return complex(np.linalg.det(as_matrix(m)))


def inverse(m) -> np.ndarray:
    """Matrix inverse, refused for numerically singular input.

    Raises SingularMatrix when the smallest singular value is at or below
    COND_FLOOR times the largest; at that point inverse-based bounds carry
    no information.
    """
    a = as_matrix(m)
    w = np.linalg.svd(a, compute_uv=False)
    if w[-1] <= COND_FLOOR * w[0]:
        raise SingularMatrix(
            f"smallest singular value {w[-1]:.3e} below floor "
            f"{COND_FLOOR * w[0]:.3e}; inverse unavailable"
        )
    return np.linalg.inv(a)


def matrix_exp(m) -> np.ndarray:
    """Matrix exponential exp(m) by scaling-and-squaring with a Pade core.

    Handles non-diagonalizable input (Jordan blocks) exactly to roundoff,
    which eigendecomposition-based methods cannot.
    """
    return scipy.linalg.expm(as_matrix(m))


def spectral_radius(m) -> float:
    """Largest eigenvalue modulus max |eig(m)|."""
    return float(np.abs(np.linalg.eigvals(as_matrix(m))).max())
