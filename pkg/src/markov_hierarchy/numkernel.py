"""Dense Hermitian numerics for the small matrices used throughout.

All matrices are plain ``numpy`` arrays of dtype ``complex128``.  Matrix
functions are built from a single Hermitian eigendecomposition, so
inverses and square roots of non-diagonal blocks are handled correctly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import NoConvergence, NotHermitian, NotPositiveDefinite, SingularBlock

ComplexMatrix = NDArray[np.complex128]

HERMITIAN_RTOL = 1e-10
SINGULAR_RTOL = 1e-10


def as_matrix(a: ArrayLike, name: str = "matrix") -> ComplexMatrix:
    """Return ``a`` as a finite 2-D complex array (copy)."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim == 1 and m.size == 1:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


def hermitian_defect(a: ComplexMatrix) -> float:
    """Largest entry of ``a - a^dagger``."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - dagger(a))))


def symmetrize(a: ArrayLike) -> ComplexMatrix:
    """Check Hermiticity at the library tolerance and return ``(a + a^dagger)/2``."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    scale = 1.0 + (float(np.max(np.abs(m))) if m.size else 0.0)
    defect = hermitian_defect(m)
    if defect > HERMITIAN_RTOL * scale:
        raise NotHermitian(f"|a - a^dagger|_max = {defect:.3e} exceeds tolerance")
    return 0.5 * (m + dagger(m))


@dataclass(frozen=True)
class HermitianEig:
    """Ascending eigenvalues with the matching orthonormal eigenvector columns."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def apply(self, values: NDArray) -> ComplexMatrix:
        """Rebuild ``V diag(values) V^dagger``."""
        v = self.eigenvectors
        return (v * values) @ dagger(v)


def herm_eig(a: ArrayLike) -> HermitianEig:
    m = symmetrize(a)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return HermitianEig(np.asarray(w, dtype=np.float64), np.asarray(v, dtype=np.complex128))


def unitary_propagator(h: ArrayLike, t: float, eig: HermitianEig | None = None) -> ComplexMatrix:
    """``exp(-i h t)`` with hbar = 1."""
    eig = herm_eig(h) if eig is None else eig
    return eig.apply(np.exp(-1j * eig.eigenvalues * t))


def spectral_norms(a: ArrayLike) -> tuple[float, float]:
    """Operator norm (max |eigenvalue|) and trace norm (sum |eigenvalue|)."""
    lam = np.abs(herm_eig(a).eigenvalues)
    if lam.size == 0:
        return 0.0, 0.0
    return float(lam.max()), float(lam.sum())


def op_norm(a: ArrayLike) -> float:
    """Largest singular value; works for rectangular ``a``."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, ord=2))


def herm_inverse(a: ArrayLike) -> ComplexMatrix:
    eig = herm_eig(a)
    lam = eig.eigenvalues
    if lam.size == 0:
        raise SingularBlock("cannot invert an empty block")
    smallest, norm = float(np.min(np.abs(lam))), float(np.max(np.abs(lam)))
    if norm == 0.0 or smallest <= SINGULAR_RTOL * norm:
        raise SingularBlock(f"block is singular (min |eigenvalue| {smallest:.3e}, norm {norm:.3e})")
    return eig.apply(1.0 / lam)


def herm_sqrt_pair(p: ArrayLike) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Return ``(p^{-1/2}, p^{+1/2})`` for positive-definite ``p``."""
    eig = herm_eig(p)
    lam = eig.eigenvalues
    if lam.size == 0 or np.min(lam) <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue {lam.min() if lam.size else 0.0:.3e} <= 0")
    root = np.sqrt(lam)
    return eig.apply(1.0 / root), eig.apply(root)


def herm_inv_sqrt(p: ArrayLike) -> ComplexMatrix:
    return herm_sqrt_pair(p)[0]
