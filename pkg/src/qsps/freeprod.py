"""Free products of subproduct systems and their fibre decompositions.

The free product of two quadratic systems is the quadratic system on the
disjoint union of the alphabets whose relation space is the embedded union
of the factors' relation spaces.  Its level-m fibre decomposes into
alternating tensor blocks indexed by a start factor and a composition of m;
this module constructs those blocks explicitly and checks the decomposition
as an exact integer identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    DecompositionMismatch,
    DimensionMismatch,
    InsufficientLevels,
    NotGeneric,
    OutOfRange,
)
from .series import HilbertSeries, invert_series, invert_series_rational
from .subspace import Subspace, complement, containment_defect, span
from .systems import SubproductSystem, build_from_relation_space, hilbert_series, is_generic

Composition = tuple[int, ...]


def compositions(n: int, p: int | None = None) -> list[Composition]:
    """Compositions of n (into exactly p parts if given), in descending lexicographic order."""
    if n < 1:
        raise OutOfRange("compositions are defined for n >= 1")
    if p is not None and not 1 <= p <= n:
        raise OutOfRange(f"part count must lie in [1, {n}]")
    out: list[Composition] = []

    def rec(remaining: int, prefix: tuple[int, ...]):
        if remaining == 0:
            if p is None or len(prefix) == p:
                out.append(prefix)
            return
        if p is not None and len(prefix) >= p:
            return
        for first in range(remaining, 0, -1):
            rec(remaining - first, prefix + (first,))

    rec(n, ())
    return out


def embed_indices(d_factor: int, big_d: int, offset: int, legs: int) -> np.ndarray:
    """Row indices of factor words inside the joint alphabet's tensor power."""
    idx = np.arange(d_factor**legs)
    joint = np.zeros_like(idx)
    rest = idx
    for leg in range(legs):
        power = d_factor ** (legs - 1 - leg)
        digit = rest // power
        rest = rest % power
        joint = joint * big_d + (digit + offset)
    return joint


def embed_basis(mat: np.ndarray, d_factor: int, big_d: int, offset: int, legs: int) -> np.ndarray:
    """Embed a (d_factor**legs x k) matrix into (big_d**legs x k) coordinates."""
    out = np.zeros((big_d**legs, mat.shape[1]), dtype=complex)
    out[embed_indices(d_factor, big_d, offset, legs)] = mat
    return out


def relation_space(system: SubproductSystem, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """The relation space R = H_2^perp inside H_1 tensor H_1."""
    return complement(system.fibres[2], cfg)


def free_product(
    s1: SubproductSystem,
    s2: SubproductSystem,
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> SubproductSystem:
    """Free product: relations of s1 on variables 1..d1, of s2 on d1+1..d1+d2."""
    d1, d2 = s1.d, s2.d
    big_d = d1 + d2
    r1 = embed_basis(relation_space(s1, cfg).basis, d1, big_d, 0, 2)
    r2 = embed_basis(relation_space(s2, cfg).basis, d2, big_d, d1, 2)
    joint = span(np.hstack([r1, r2]), big_d * big_d, cfg)
    if joint.dim != s1.r + s2.r:
        raise DecompositionMismatch("embedded relation spaces are not independent")
    return build_from_relation_space(
        big_d,
        joint,
        max_level,
        cfg,
        tl_free_product=s1.tl_free_product and s2.tl_free_product,
    )


def _block_pattern(start_factor: int, comp: Composition) -> list[int]:
    return [(start_factor + j) % 2 for j in range(len(comp))]


@dataclass(frozen=True)
class BlockInfo:
    start_factor: int
    composition: Composition
    dim: int

    def to_dict(self) -> dict:
        return {
            "start_factor": self.start_factor,
            "composition": list(self.composition),
            "dim": self.dim,
        }


@dataclass(frozen=True)
class DecompositionReport:
    level: int
    blocks: tuple[BlockInfo, ...]
    fibre_dim: int
    max_containment_defect: float
    max_orthogonality_defect: float
    passed: bool

    @property
    def block_dim_sum(self) -> int:
        return sum(b.dim for b in self.blocks)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "blocks": [b.to_dict() for b in self.blocks],
            "block_dim_sum": self.block_dim_sum,
            "fibre_dim": self.fibre_dim,
            "max_containment_defect": self.max_containment_defect,
            "max_orthogonality_defect": self.max_orthogonality_defect,
            "passed": self.passed,
        }


def alternating_block_basis(
    factors: list[SubproductSystem],
    offsets: list[int],
    big_d: int,
    start_factor: int,
    comp: Composition,
) -> np.ndarray:
    """Orthonormal basis of the embedded block H^(i)_{d_1} ox H^(1-i)_{d_2} ox ..."""
    pattern = [(start_factor + j) % len(factors) for j in range(len(comp))]
    mat = np.ones((1, 1), dtype=complex)
    for f_idx, part in zip(pattern, comp):
        factor = factors[f_idx]
        if part > factor.max_level:
            raise InsufficientLevels(f"factor {f_idx} not built to level {part}")
        piece = embed_basis(factor.fibres[part].basis, factor.d, big_d, offsets[f_idx], part)
        mat = np.kron(mat, piece)
    return mat


def verify_fibre_decomposition(
    s1: SubproductSystem,
    s2: SubproductSystem,
    m: int,
    free_prod: SubproductSystem | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> DecompositionReport:
    """Check the alternating-block decomposition of the free-product fibre at level m.

    Asserts (a) blocks pairwise orthogonal, (b) every block sits inside the
    fibre, (c) the block dimensions add up to the fibre dimension exactly.
    """
    if m < 1:
        raise OutOfRange("decomposition is checked at levels m >= 1")
    if free_prod is None:
        free_prod = free_product(s1, s2, m, cfg)
    if free_prod.max_level < m:
        raise InsufficientLevels(f"free product built to {free_prod.max_level} < {m}")
    factors = [s1, s2]
    offsets = [0, s1.d]
    big_d = s1.d + s2.d

    blocks: list[BlockInfo] = []
    bases: list[np.ndarray] = []
    for start in (0, 1):
        for p in range(1, m + 1):
            for comp in compositions(m, p):
                basis = alternating_block_basis(factors, offsets, big_d, start, comp)
                blocks.append(BlockInfo(start, comp, basis.shape[1]))
                if basis.shape[1]:
                    bases.append(basis)

    fibre = free_prod.fibres[m]
    max_containment = 0.0
    for basis in bases:
        max_containment = max(
            max_containment,
            containment_defect(fibre, Subspace(fibre.ambient_dim, basis, cfg.rank_rel_tol)),
        )
    max_orthogonality = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            overlap = float(np.linalg.norm(bases[i].conj().T @ bases[j]))
            max_orthogonality = max(max_orthogonality, overlap)

    dim_sum = sum(b.dim for b in blocks)
    passed = (
        dim_sum == fibre.dim
        and max_containment <= cfg.check_abs_tol
        and max_orthogonality <= cfg.check_abs_tol
    )
    return DecompositionReport(m, tuple(blocks), fibre.dim, max_containment, max_orthogonality, passed)


def fusion_check(system: SubproductSystem, m: int | None = None) -> bool:
    """Dimension identity delta_m * delta_1 = delta_{m+1} + r * delta_{m-1}.

    Requires a generic system; checks level m, or every computed level when
    m is None.
    """
    if not is_generic(system):
        raise NotGeneric("fusion rule requires a generic system")
    dims = system.dims()
    levels = range(1, system.max_level) if m is None else [m]
    for k in levels:
        if k < 1 or k + 1 > system.max_level:
            raise InsufficientLevels(f"fusion check at level {k} needs level {k + 1}")
        if dims[k] * dims[1] != dims[k + 1] + system.r * dims[k - 1]:
            return False
    return True


def fock_free_product_dims(
    s1: SubproductSystem,
    s2: SubproductSystem,
    max_level: int,
    free_prod: SubproductSystem | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    verify: bool = True,
) -> HilbertSeries:
    """Graded dimensions of the Hilbert-space free product of the two Fock spaces.

    Enumerates alternating words of positive-degree fibres and multiplies
    dimensions; asserts agreement with the free-product fibres (built here
    when not supplied, unless verify=False).
    """
    if s1.max_level < max_level or s2.max_level < max_level:
        raise InsufficientLevels("factors must be built to the requested level")
    dims = [s1.dims(), s2.dims()]
    out = [1]
    for m in range(1, max_level + 1):
        total = 0
        for start in (0, 1):
            for p in range(1, m + 1):
                for comp in compositions(m, p):
                    prod = 1
                    for j, part in enumerate(comp):
                        prod *= dims[(start + j) % 2][part]
                    total += prod
        out.append(total)
    series = HilbertSeries(tuple(out))
    if free_prod is None:
        free_prod = free_product(s1, s2, max_level, cfg)
    direct = hilbert_series(free_prod).truncate(max_level)
    if series != direct:
        raise DecompositionMismatch(
            f"Fock free-product dims {series.coefficients} != fibre dims {direct.coefficients}"
        )
    return series


def _free_product_series_signed(h1: HilbertSeries, h2: HilbertSeries, max_level: int, unit_sign: int):
    """h^{-1} = h1^{-1} + h2^{-1} + unit_sign, exact over rationals."""
    inv1 = invert_series(list(h1.coefficients), max_level)
    inv2 = invert_series(list(h2.coefficients), max_level)
    combined = [x + y for x, y in zip(inv1, inv2)]
    combined[0] += unit_sign
    return invert_series_rational(combined, max_level)


def free_product_series(h1: HilbertSeries, h2: HilbertSeries, max_level: int) -> HilbertSeries:
    """Series of the free product: h^{-1} = h1^{-1} + h2^{-1} - 1.

    The classical free-product formula; the two-generator free algebra and
    every directly computed fibre sequence confirm the -1 unit term.
    """
    rational = _free_product_series_signed(h1, h2, max_level, -1)
    if any(c.denominator != 1 for c in rational):
        raise NonUnitalSeries("free-product series is not integral")
    return HilbertSeries(tuple(int(c) for c in rational))
