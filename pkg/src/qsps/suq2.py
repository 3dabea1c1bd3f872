"""Determinants of SU_q(2) corepresentations and their subproduct systems.

The determinant of the irreducible corepresentation of highest weight n is
the line spanned by the antidiagonal Temperley-Lieb vector with
coefficients (-1)^i q^((2i - n - 2)/2) on e_i ox e_{n+2-i}.  The symmetric
exponent reproduces the fundamental case n = 1 exactly and keeps
|a_i a_{n+2-i}| = 1 for every n; see the README for the convention note.
For a direct sum with multiplicities, the determinant carries one such
vector for every ordered pair of copies of each weight, so its dimension
is the sum of the squared multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import OutOfRange
from .poly import NCPoly, vector_to_poly
from .series import HilbertSeries, generic_series
from .subspace import Subspace
from .systems import SubproductSystem, build_from_relation_space


@dataclass(frozen=True)
class RepSpec:
    """A finite-dimensional corepresentation: distinct weights with multiplicities."""

    weights: tuple[tuple[int, int], ...]  # (highest weight n, multiplicity k)
    q: float

    def __post_init__(self):
        if not self.weights:
            raise OutOfRange("need at least one weight")
        seen = set()
        for n, k in self.weights:
            if n < 0 or k < 1:
                raise OutOfRange(f"invalid weight entry ({n}, {k})")
            if n in seen:
                raise OutOfRange(f"repeated weight {n}; use the multiplicity field")
            seen.add(n)
        if not 0 < self.q <= 1:
            raise OutOfRange(f"q must lie in (0, 1], got {self.q}")

    @property
    def total_dim(self) -> int:
        return sum(k * (n + 1) for n, k in self.weights)

    @property
    def multiplicity_free(self) -> bool:
        return all(k == 1 for _, k in self.weights)

    @staticmethod
    def parse(text: str, q: float) -> "RepSpec":
        """Parse 'n:k,n:k' pairs (bare 'n' means multiplicity 1)."""
        weights = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if ":" in chunk:
                n, k = chunk.split(":", 1)
                weights.append((int(n), int(k)))
            else:
                weights.append((int(chunk), 1))
        return RepSpec(tuple(weights), q)


def det_coefficients(n: int, q: float) -> np.ndarray:
    """Unit-normalised coefficients a_1 .. a_{n+1} of the weight-n determinant."""
    if n < 1:
        raise OutOfRange("determinant vectors exist for weights n >= 1")
    if not 0 < q <= 1:
        raise OutOfRange(f"q must lie in (0, 1], got {q}")
    i = np.arange(1, n + 2)
    coeffs = (-1.0) ** i * q ** ((2 * i - n - 2) / 2.0)
    return coeffs / np.linalg.norm(coeffs)


def det_vector_irrep(n: int, q: float) -> NCPoly:
    """The weight-n determinant as the TL polynomial sum a_i X_i X_{n+2-i}."""
    coeffs = det_coefficients(n, q)
    d = n + 1
    terms = {(i, n + 2 - i): complex(coeffs[i - 1]) for i in range(1, n + 2)}
    return NCPoly(terms, d)


def det_space(spec: RepSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the determinant of the corepresentation.

    For each weight (n, k) and each ordered pair of copies (l, r) the basis
    vector places the irreducible coefficients across the copies:
    sum_i a_i e^l_i ox e^r_{n+2-i}.
    """
    total = spec.total_dim
    vectors = []
    offset = 0
    for n, k in spec.weights:
        width = n + 1
        if n == 0:
            # weight 0 is the trivial corepresentation: its square is trivial,
            # so each ordered pair of copies contributes e^l_1 ox e^r_1
            coeffs = np.ones(1)
        else:
            coeffs = det_coefficients(n, spec.q)
        for l in range(k):
            for r in range(k):
                vec = np.zeros(total * total, dtype=complex)
                for i in range(1, width + 1):
                    row = offset + l * width + (i - 1)
                    col = offset + r * width + (width - i)
                    vec[row * total + col] = coeffs[i - 1]
                vectors.append(vec)
        offset += k * width
    basis = np.column_stack(vectors)
    return Subspace(total * total, basis, cfg.rank_rel_tol)


def suq2_system(
    spec: RepSpec,
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> SubproductSystem:
    """Quadratic system with H_2 the orthogonal complement of the determinant."""
    det = det_space(spec, cfg)
    in_tl_class = spec.multiplicity_free and all(n >= 1 for n, _ in spec.weights)
    return build_from_relation_space(spec.total_dim, det, max_level, cfg, tl_free_product=in_tl_class)


def det_polynomials(spec: RepSpec) -> list[NCPoly]:
    """The determinant basis as polynomials over the combined alphabet."""
    det = det_space(spec)
    return [vector_to_poly(det.basis[:, j], spec.total_dim, 2) for j in range(det.dim)]


def isotypical_series(n: int, t: int, max_level: int) -> HilbertSeries:
    """Series of rho_n^(+t): (1 - t(n+1)z + t^2 z^2)^{-1}, equal to h_n(tz).

    Both expansions are computed and compared; OutOfRange on parameter
    errors, DecompositionMismatch cannot occur (the identity is exact).
    """
    if n < 1 or t < 1:
        raise OutOfRange("need weight n >= 1 and multiplicity t >= 1")
    direct = generic_series(t * (n + 1), t * t, max_level)
    scaled = HilbertSeries(
        tuple(t**m * c for m, c in enumerate(generic_series(n + 1, 1, max_level).coefficients))
    )
    assert direct == scaled  # coefficient identity h_{tn}(z) = h_n(tz)
    return direct
