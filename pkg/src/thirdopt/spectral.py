"""Symmetric eigendecompositions and orthonormal subspaces.

Eigenvalues are always reported in descending order; every consumer in
this package relies on that convention when it walks suffix subspaces
(the spans of trailing eigenvectors, which collect the low-curvature
directions).

Repeated eigenvalues make individual eigenvectors non-unique, so callers
must only rely on the spanned subspaces.  Downstream code works with
projectors exclusively, which are basis-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def spectral_scale(self) -> float:
        """max(1, |largest eigenvalue|, |smallest eigenvalue|)."""
        return max(1.0, abs(float(self.eigenvalues[0])), abs(float(self.eigenvalues[-1])))

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


def eig_sym(matrix, sym_tol: float = 1e-8) -> EigenDecomp:
    """Eigendecompose a symmetric matrix, eigenvalues sorted descending.

    Raises ValueError if the input deviates from symmetry by more than
    ``sym_tol`` relative to its Frobenius norm.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = np.linalg.norm(m - m.T)
    if asym > sym_tol * max(1.0, np.linalg.norm(m)):
        raise ValueError(f"matrix is not symmetric (asymmetry {asym:.3e})")
    values, vectors = np.linalg.eigh((m + m.T) / 2.0)
    return EigenDecomp(values[::-1].copy(), vectors[:, ::-1].copy())


class Subspace:
    """A subspace of R^n held as orthonormal basis columns (possibly none)."""

    __slots__ = ("dim", "basis")

    def __init__(self, dim: int, basis) -> None:
        basis = np.asarray(basis, dtype=float)
        if basis.size == 0:
            basis = basis.reshape(dim, 0)
        if basis.ndim != 2 or basis.shape[0] != dim:
            raise ValueError(f"basis of shape {basis.shape} does not fit ambient dim {dim}")
        k = basis.shape[1]
        if k > dim:
            raise ValueError(f"{k} basis vectors exceed ambient dim {dim}")
        if k > 0:
            gram = basis.T @ basis
            if np.abs(gram - np.eye(k)).max() > _ORTHO_TOL:
                raise ValueError("basis columns are not orthonormal")
        self.dim = dim
        self.basis = basis

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(dim, np.eye(dim))

    @classmethod
    def empty(cls, dim: int) -> "Subspace":
        return cls(dim, np.zeros((dim, 0)))

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.basis.shape[1] == 0

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def project_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.basis @ (self.basis.T @ v)

    def contains(self, v, tol: float = 1e-10) -> bool:
        v = np.asarray(v, dtype=float)
        return bool(np.linalg.norm(self.project_vector(v) - v) <= tol * max(1.0, np.linalg.norm(v)))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Subspace(dim={self.dim}, rank={self.rank})"


def subspace_at_most(decomp: EigenDecomp, tau: float, tol: float = 0.0) -> Subspace:
    """Span of the eigenvectors whose eigenvalue is at most ``tau + tol``.

    With the descending ordering this is always a trailing block of the
    eigenvector columns.
    """
    keep = decomp.eigenvalues <= tau + tol
    return Subspace(decomp.dim, decomp.eigenvectors[:, keep])


def null_space(decomp: EigenDecomp, tol: float = 1e-8) -> Subspace:
    """Numerical kernel: eigenvectors with |eigenvalue| below a relative band.

    The band is ``tol * max(1, |extreme eigenvalues|)``; the exact
    condition "u'Mu = 0" has to be relaxed this way in floating point.
    """
    band = tol * decomp.spectral_scale()
    keep = np.abs(decomp.eigenvalues) <= band
    return Subspace(decomp.dim, decomp.eigenvectors[:, keep])
