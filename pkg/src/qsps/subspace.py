"""Dense numerical subspaces of C^N.

Every fibre computation in the library reduces to the operations here:
orthonormalisation (span), orthogonal complements, intersections via
principal angles, Kronecker tensor products, and containment tests.
Ranks are decided by singular-value thresholding relative to the largest
singular value; verification predicates use an absolute residual bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionMismatch


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^N held as an N x k matrix with orthonormal columns."""

    ambient_dim: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL.rank_rel_tol

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise DimensionMismatch(f"basis shape {b.shape} vs ambient {self.ambient_dim}")
        if b.shape[1] > self.ambient_dim:
            raise DimensionMismatch("more basis vectors than ambient dimensions")
        object.__setattr__(self, "basis", b)
        if b.shape[1]:
            gram_defect = b.conj().T @ b - np.eye(b.shape[1])
            if np.linalg.norm(gram_defect) > 10 * max(self.tol, 1e-12):
                raise ValueError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim})"


def zero_subspace(ambient_dim: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    return Subspace(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex), cfg.rank_rel_tol)


def full_subspace(ambient_dim: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    return Subspace(ambient_dim, np.eye(ambient_dim, dtype=complex), cfg.rank_rel_tol)


def span(vectors, ambient_dim: int | None = None, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the span; rank decided by relative singular values."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        mat = np.asarray(vectors, dtype=complex)
        if ambient_dim is None:
            ambient_dim = mat.shape[0]
    else:
        cols = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        if ambient_dim is None:
            if not cols:
                raise DimensionMismatch("cannot infer ambient dimension from no vectors")
            ambient_dim = cols[0].size
        for v in cols:
            if v.size != ambient_dim:
                raise DimensionMismatch(f"vector of length {v.size} in C^{ambient_dim}")
        mat = np.column_stack(cols) if cols else np.zeros((ambient_dim, 0), dtype=complex)
    if mat.shape[0] != ambient_dim:
        raise DimensionMismatch(f"matrix has {mat.shape[0]} rows, ambient is {ambient_dim}")
    if mat.shape[1] == 0 or not np.any(mat):
        return zero_subspace(ambient_dim, cfg)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s >= cfg.rank_rel_tol * s[0]))
    return Subspace(ambient_dim, u[:, :rank], cfg.rank_rel_tol)


def complement(s: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement; dim(s) + dim(result) = ambient_dim."""
    n, k = s.ambient_dim, s.dim
    if k == 0:
        return full_subspace(n, cfg)
    if k == n:
        return zero_subspace(n, cfg)
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(n, u[:, k:], cfg.rank_rel_tol)


def intersect(s1: Subspace, s2: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Intersection via principal angles: SVD of basis1^H basis2, keep cos ~= 1."""
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(f"{s1.ambient_dim} vs {s2.ambient_dim}")
    if s1.dim == 0 or s2.dim == 0:
        return zero_subspace(s1.ambient_dim, cfg)
    if s1.dim > s2.dim:
        s1, s2 = s2, s1
    m = s1.basis.conj().T @ s2.basis
    u, sing, _ = np.linalg.svd(m)
    keep = int(np.sum(sing > 1.0 - cfg.rank_rel_tol))
    if keep == 0:
        return zero_subspace(s1.ambient_dim, cfg)
    return Subspace(s1.ambient_dim, s1.basis @ u[:, :keep], cfg.rank_rel_tol)


def tensor(s1: Subspace, s2: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Tensor product: Kronecker products of the bases (already orthonormal)."""
    n = s1.ambient_dim * s2.ambient_dim
    if s1.dim == 0 or s2.dim == 0:
        return zero_subspace(n, cfg)
    return Subspace(n, np.kron(s1.basis, s2.basis), cfg.rank_rel_tol)


def containment_defect(s1: Subspace, s2: Subspace) -> float:
    """Frobenius norm of (1 - P_{s1}) applied to the basis of s2."""
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(f"{s1.ambient_dim} vs {s2.ambient_dim}")
    if s2.dim == 0:
        return 0.0
    residual = s2.basis - s1.basis @ (s1.basis.conj().T @ s2.basis)
    return float(np.linalg.norm(residual))


def contains(s1: Subspace, s2: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether s2 is contained in s1 up to check_abs_tol."""
    return containment_defect(s1, s2) <= cfg.check_abs_tol


def equal(s1: Subspace, s2: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    return s1.dim == s2.dim and contains(s1, s2, cfg) and contains(s2, s1, cfg)


def projector(s: Subspace) -> np.ndarray:
    """The N x N orthogonal projection onto s."""
    return s.basis @ s.basis.conj().T


def direct_sum_span(s1: Subspace, s2: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """span(s1 union s2); the name reflects the common orthogonal use."""
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(f"{s1.ambient_dim} vs {s2.ambient_dim}")
    return span(np.hstack([s1.basis, s2.basis]), s1.ambient_dim, cfg)
