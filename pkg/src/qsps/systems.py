"""Subproduct systems from quadratic ideals.

A standard subproduct system is stored as the list of its fibres, each a
Subspace of the full tensor power of C^d.  Construction follows the
two-sided intersection recursion

    H_{m+1} = (H_1 tensor H_m) intersect (H_m tensor H_1),

seeded by H_2 = (span of the degree-2 generators)^perp.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig, check_budget, default_max_level
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    DimensionMismatch,
    EmptyAlphabet,
    ImproperIdealWarning,
    InsufficientLevels,
    OutOfRange,
)
from .poly import QuadraticIdeal
from .series import HilbertSeries, anick_lower_bound, generic_series, geq
from .subspace import (
    Subspace,
    complement,
    contains,
    containment_defect,
    full_subspace,
    intersect,
    span,
    tensor,
    zero_subspace,
)


@dataclass(frozen=True)
class SubproductSystem:
    """Fibres H_0 .. H_N of a standard subproduct system, H_n inside C^(d**n).

    r is the dimension of the relation space, the orthogonal complement of
    H_2 inside H_1 tensor H_1.  tl_free_product marks systems constructed
    as free products of Temperley-Lieb (or SU_q(2)) factors; the K-theory
    module uses it as the validated-hypotheses flag.
    """

    d: int
    fibres: tuple[Subspace, ...]
    r: int
    tl_free_product: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise EmptyAlphabet("need at least one generator")
        if len(self.fibres) < 2:
            raise InsufficientLevels("a system carries at least levels 0 and 1")
        if self.fibres[0].dim != 1 or self.fibres[1].dim != self.d:
            raise DimensionMismatch("H_0 must be C and H_1 must be C^d")

    @property
    def max_level(self) -> int:
        return len(self.fibres) - 1

    def dims(self) -> list[int]:
        return [f.dim for f in self.fibres]

    def fibre(self, n: int) -> Subspace:
        if n > self.max_level:
            raise InsufficientLevels(f"level {n} not built (max {self.max_level})")
        return self.fibres[n]

    def axiom_defect(self, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
        """Max containment defect of H_{m+n} inside H_m tensor H_n over built levels."""
        worst = 0.0
        for m in range(1, self.max_level):
            for n in range(1, self.max_level - m + 1):
                prod = tensor(self.fibres[m], self.fibres[n], cfg)
                worst = max(worst, containment_defect(prod, self.fibres[m + n]))
        return worst


def hilbert_series(system: SubproductSystem) -> HilbertSeries:
    return HilbertSeries(tuple(system.dims()))


def _seed_fibres(d: int, h2: Subspace, cfg: ToleranceConfig) -> list[Subspace]:
    if h2.ambient_dim != d * d:
        raise DimensionMismatch(f"H_2 lives in C^{d*d}, got ambient {h2.ambient_dim}")
    if h2.dim == 0:
        warnings.warn(
            "generators span all of degree two; the ideal is improper and all "
            "higher fibres vanish",
            ImproperIdealWarning,
            stacklevel=3,
        )
    return [full_subspace(1, cfg), full_subspace(d, cfg), h2]


def _check_step_memory(d: int, level: int, dim: int) -> None:
    from .config import max_dense_elements

    needed = d**level * d * dim
    if needed > max_dense_elements():
        raise BudgetExceeded(
            f"level {level} needs about {needed:.1e} dense elements "
            f"(cap {max_dense_elements():.1e}); pass a smaller max_level or "
            "raise SPS_MAX_DENSE_ELEMENTS"
        )


def _grow_quadratic(fibres: list[Subspace], d: int, max_level: int, cfg: ToleranceConfig) -> None:
    """Extend fibres in place using H_{m+1} = H_1 ox H_m  cap  H_m ox H_1."""
    h1 = fibres[1]
    while len(fibres) <= max_level:
        hm = fibres[-1]
        if hm.dim == 0:
            fibres.append(zero_subspace(d ** len(fibres), cfg))
            continue
        _check_step_memory(d, len(fibres), hm.dim)
        left = tensor(h1, hm, cfg)
        right = tensor(hm, h1, cfg)
        fibres.append(intersect(left, right, cfg))


def build_from_relation_space(
    d: int,
    relation_space: Subspace,
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    tl_free_product: bool = False,
) -> SubproductSystem:
    """System with H_2 the orthogonal complement of the given relation space."""
    if max_level is None:
        max_level = default_max_level(d)
    if max_level < 2:
        raise OutOfRange("build at least to level 2")
    check_budget(d, max_level)
    h2 = complement(relation_space, cfg)
    fibres = _seed_fibres(d, h2, cfg)
    _grow_quadratic(fibres, d, max_level, cfg)
    return SubproductSystem(d, tuple(fibres), relation_space.dim, tl_free_product)


def build_quadratic(
    ideal: QuadraticIdeal,
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> SubproductSystem:
    """The standard subproduct system of a quadratic ideal, up to max_level."""
    relation_space = span(ideal.generator_vectors(), ideal.nvars**2, cfg)
    return build_from_relation_space(ideal.nvars, relation_space, max_level, cfg)


def build_maximal(
    prescribed: list[Subspace],
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> SubproductSystem:
    """Maximal system with prescribed fibres: H_n = cap_{i+j=n} H_i ox H_j above level k.

    prescribed lists H_0 .. H_k; the prescribed fibres must satisfy the
    subproduct axiom among themselves (AxiomViolation otherwise).
    """
    if len(prescribed) < 2:
        raise InsufficientLevels("prescribe at least H_0 and H_1")
    d = prescribed[1].ambient_dim
    if prescribed[1].dim != d:
        raise DimensionMismatch("H_1 must be the full space C^d")
    for i, s in enumerate(prescribed):
        if s.ambient_dim != d**i:
            raise DimensionMismatch(f"prescribed fibre {i} has ambient {s.ambient_dim}, want {d}**{i}")
    for i in range(1, len(prescribed)):
        for j in range(1, len(prescribed) - i):
            prod = tensor(prescribed[i], prescribed[j], cfg)
            if not contains(prod, prescribed[i + j], cfg):
                raise AxiomViolation(f"prescribed H_{i + j} is not inside H_{i} ox H_{j}")
    if max_level is None:
        max_level = default_max_level(d)
    check_budget(d, max_level)
    fibres = list(prescribed[: max_level + 1])
    while len(fibres) <= max_level:
        n = len(fibres)
        current = tensor(fibres[1], fibres[n - 1], cfg)
        for i in range(2, n):
            if current.dim == 0:
                break
            current = intersect(current, tensor(fibres[i], fibres[n - i], cfg), cfg)
        fibres.append(current)
    r = d * d - fibres[2].dim if max_level >= 2 else 0
    return SubproductSystem(d, tuple(fibres), r)


def is_generic(system: SubproductSystem) -> bool:
    """Dimension sequence matches (1 - d z + r z^2)^{-1} on every built level.

    Under few relations this is exactly genericity of the relation space
    (Anick); the verdict is only meaningful up to the built level.
    """
    if system.max_level < 3:
        raise InsufficientLevels("genericity needs fibres up to level 3")
    expected = generic_series(system.d, system.r, system.max_level)
    return tuple(system.dims()) == expected.coefficients


def has_few_relations(system: SubproductSystem) -> bool:
    return 4 * system.r <= system.d**2


def anick_bound_holds(system: SubproductSystem) -> bool:
    return geq(hilbert_series(system), anick_lower_bound(system.d, system.r, system.max_level))


def min_dim_a3(d: int, s: int) -> int:
    """Minimal dim(A_3) over quadratic algebras with dim(A_1) = d, dim(A_2) = s."""
    if d < 1:
        raise OutOfRange("d must be positive")
    if not 0 <= s <= d * d:
        raise OutOfRange(f"s must lie in [0, {d * d}]")
    if 2 * s <= d * d:
        return 0
    return 2 * d * s - d**3


def verify_one_relator_equivalence(
    a: np.ndarray,
    b: np.ndarray,
    u: np.ndarray,
    lam: complex,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """Check the witness (U, lambda) for B = lambda U^t A U with U unitary."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if not (a.shape == b.shape == u.shape) or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("A, B, U must be square matrices of equal size")
    if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) > cfg.check_abs_tol:
        return False
    return bool(np.linalg.norm(b - lam * (u.T @ a @ u)) <= cfg.check_abs_tol)


def change_variables(ideal: QuadraticIdeal, u: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Relation space of the ideal after the linear change of variables given by u.

    Returns the transformed relation space (u ox u) R; the induced system has
    the same dimension sequence whenever u is unitary.
    """
    u = np.asarray(u, dtype=complex)
    d = ideal.nvars
    if u.shape != (d, d):
        raise DimensionMismatch(f"change of variables must be {d} x {d}")
    vecs = ideal.generator_vectors()
    return span(np.kron(u, u) @ vecs, d * d, cfg)
