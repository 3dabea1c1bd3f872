"""Monomial quadratic ideals as 0/1 incidence matrices and graph joins.

The ideal of a matrix A is generated by the monomials X_i X_j with
A[i][j] = 0; the fibres are spanned by the admissible words, so their
dimensions equal the entry sums of the powers of A.  The join of two
graphs glues all cross edges, i.e. all-ones off-diagonal blocks, and
realises the free product of the monomial systems.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DecompositionMismatch, ZeroRowOrColumn
from .poly import NCPoly, QuadraticIdeal
from .systems import SubproductSystem, build_quadratic


def validate_incidence(a) -> np.ndarray:
    mat = np.asarray(a, dtype=int)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("incidence matrix must be square")
    if not np.isin(mat, (0, 1)).all():
        raise ValueError("incidence matrix entries must be 0 or 1")
    if (mat.sum(axis=1) == 0).any() or (mat.sum(axis=0) == 0).any():
        raise ZeroRowOrColumn("incidence matrix has a zero row or column")
    return mat


def monomial_ideal(a) -> QuadraticIdeal:
    mat = validate_incidence(a)
    n = mat.shape[0]
    gens = [
        NCPoly({(i + 1, j + 1): 1.0}, n)
        for i in range(n)
        for j in range(n)
        if mat[i, j] == 0
    ]
    return QuadraticIdeal.from_polys(gens, n)


def admissible_word_counts(a, max_level: int) -> list[int]:
    """dim H_m = sum of entries of A**(m-1): exact walk counts."""
    mat = validate_incidence(a).astype(object)  # exact integer arithmetic
    counts = [1]
    if max_level >= 1:
        counts.append(mat.shape[0])
    power = np.eye(mat.shape[0], dtype=object)
    for _ in range(2, max_level + 1):
        power = power @ mat
        counts.append(int(power.sum()))
    return counts


def monomial_system(a, max_level: int | None = None, cfg: ToleranceConfig = DEFAULT_TOL) -> SubproductSystem:
    """Subspace construction of the monomial system, cross-checked against walk counts."""
    mat = validate_incidence(a)
    system = build_quadratic(monomial_ideal(mat), max_level, cfg)
    counts = admissible_word_counts(mat, system.max_level)
    if system.dims() != counts:
        raise DecompositionMismatch(
            f"subspace dims {system.dims()} disagree with transfer-matrix counts {counts}"
        )
    return system


def graph_join(a, b) -> np.ndarray:
    """Block matrix [[A, 1], [1, B]]: the incidence matrix of the graph join."""
    ma = validate_incidence(a)
    mb = validate_incidence(b)
    n, m = ma.shape[0], mb.shape[0]
    out = np.ones((n + m, n + m), dtype=int)
    out[:n, :n] = ma
    out[n:, n:] = mb
    return out
