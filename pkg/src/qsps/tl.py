"""Temperley-Lieb relation systems: recognition, normal form, and the w isometries.

A degree-2 polynomial P with coefficient matrix A is Temperley-Lieb when
the rank-one projector e onto its coefficient vector satisfies
(e ox 1)(1 ox e)(e ox 1) = (1/lambda)(e ox 1); equivalently A conj(A) is
unitary up to a positive scalar.  Both characterisations are computed and
cross-validated.

The w maps implement the one-relator fusion H_n ox H_1 = H_{n+1} + H_{n-1}
and, for free products of TL systems, assemble into the unitaries W_n^R.
Levels are fixed so that w^i maps level m into level m+1 tensor level 1;
W_n^R collects the w^i at level n-1 together with the inclusion of level
n+1, which is the unique indexing that makes it square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    DecompositionMismatch,
    InsufficientLevels,
    NotTemperleyLieb,
    NotUnitary,
    OutOfRange,
    ZeroPolynomial,
    InconsistentCharacterizations,
)
from .freeprod import embed_basis, embed_indices
from .poly import NCPoly, coeff_matrix, poly_to_vector
from .subspace import span
from .systems import SubproductSystem, build_from_relation_space
from .tlnum import phi, q_number, solve_q

__all__ = [
    "TLSystem",
    "WMaps",
    "CompactDefect",
    "FreeTLProduct",
    "is_temperley_lieb",
    "normalize_tl",
    "q_number",
    "phi",
    "w_map_single",
    "fusion_unitary_single",
    "w_maps_free",
    "compact_defect_norm",
]


def is_temperley_lieb(p: NCPoly, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, float | None]:
    """Both TL characterisations, cross-validated; returns (verdict, lambda).

    lambda is the ratio extracted from the projection identity (None when
    the verdict is False).  It is reported, not checked against any closed
    form.
    """
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial is not Temperley-Lieb")
    if p.degree() != 2:
        raise NotTemperleyLieb("Temperley-Lieb polynomials are homogeneous of degree 2")
    d = p.nvars
    if d < 2:
        raise OutOfRange("Temperley-Lieb requires at least two variables")
    tol = cfg.check_abs_tol

    # (a) projection identity in B(H ox H ox H)
    v = poly_to_vector(p, 2)
    v = v / np.linalg.norm(v)
    e = np.outer(v, v.conj())
    e1 = np.kron(e, np.eye(d))
    e2 = np.kron(np.eye(d), e)
    t = e1 @ e2 @ e1
    lam: float | None = None
    tmax_idx = np.unravel_index(np.argmax(np.abs(t)), t.shape)
    if abs(t[tmax_idx]) <= tol:
        verdict_a = False
    else:
        ratio = e1[tmax_idx] / t[tmax_idx]
        residual = float(np.linalg.norm(t - e1 / ratio))
        verdict_a = residual <= tol and abs(ratio.imag) <= tol * abs(ratio) and ratio.real > tol
        if verdict_a:
            lam = float(ratio.real)

    # (b) A conj(A) unitary up to a scalar
    a = coeff_matrix(p)
    m = a @ a.conj()
    gram = m.conj().T @ m
    c = float(np.trace(gram).real) / d
    verdict_b = c > tol and float(np.linalg.norm(gram - c * np.eye(d))) <= tol * max(1.0, c)

    if bool(verdict_a) != bool(verdict_b):
        raise InconsistentCharacterizations(
            f"projection identity says {verdict_a}, matrix criterion says {verdict_b}"
        )
    return bool(verdict_a), lam


@dataclass(frozen=True)
class TLSystem:
    """A normalised Temperley-Lieb polynomial and its subproduct system.

    a is rescaled so that a conj(a) is unitary; q in (0, 1] solves
    Tr(a^H a) = q + 1/q; v is the unit coefficient vector of a.
    """

    poly: NCPoly
    a: np.ndarray
    q: float
    v: np.ndarray
    lam: float
    system: SubproductSystem

    @property
    def d(self) -> int:
        return self.poly.nvars


def normalize_tl(
    p: NCPoly,
    max_level: int | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> TLSystem:
    """Normalise a TL polynomial and build its one-relator system."""
    ok, lam = is_temperley_lieb(p, cfg)
    if not ok:
        raise NotTemperleyLieb("polynomial fails the Temperley-Lieb condition")
    a = coeff_matrix(p)
    m = a @ a.conj()
    c = float(np.trace(m.conj().T @ m).real) / p.nvars
    a = a / c**0.25
    trace = float(np.linalg.norm(a) ** 2)
    q = solve_q(trace, cfg)
    vec = a.ravel()
    v = vec / np.linalg.norm(vec)
    d = p.nvars
    if max_level is None:
        max_level = min(8, _budget_level(d))
    system = build_from_relation_space(
        d, span(v.reshape(-1, 1), d * d, cfg), max_level, cfg, tl_free_product=True
    )
    return TLSystem(p, a, q, v, float(lam), system)


def _budget_level(d: int) -> int:
    from .config import default_max_level

    return max(2, default_max_level(d))


# ---------------------------------------------------------------------------
# w maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WMaps:
    """The blocks of W_n^R in fibre coordinates, with their residuals."""

    level: int
    w_blocks: tuple[np.ndarray, ...]
    iota: np.ndarray
    w_full: np.ndarray
    isometry_defects: tuple[float, ...]
    orthogonality_defect: float
    unitary_defect_left: float
    unitary_defect_right: float

    @property
    def max_defect(self) -> float:
        return max(
            max(self.isometry_defects),
            self.orthogonality_defect,
            self.unitary_defect_left,
            self.unitary_defect_right,
        )


@dataclass(frozen=True)
class CompactDefect:
    factor: int
    level: int
    numeric: float
    closed_form: float

    @property
    def agreement(self) -> float:
        return abs(self.numeric - self.closed_form)


class FreeTLProduct:
    """Free product of r >= 1 Temperley-Lieb systems with its w machinery.

    Factor j occupies the joint variables offsets[j]+1 .. offsets[j]+d_j.
    Factor fibres are built one level beyond the joint system so that every
    tail projector is available.
    """

    def __init__(self, factors, level: int, cfg: ToleranceConfig = DEFAULT_TOL):
        self.factors = list(factors)
        if not self.factors:
            raise OutOfRange("need at least one factor")
        self.cfg = cfg
        self.level = level
        self.d_list = [t.d for t in self.factors]
        self.offsets = list(np.cumsum([0] + self.d_list[:-1]))
        self.big_d = sum(self.d_list)
        self.factor_systems = [
            _factor_system(t, level + 1, cfg) for t in self.factors
        ]
        if len(self.factors) == 1:
            self.system = self.factor_systems[0]
        else:
            vecs = [
                embed_basis(t.v.reshape(-1, 1), t.d, self.big_d, off, 2)
                for t, off in zip(self.factors, self.offsets)
            ]
            relation = span(np.hstack(vecs), self.big_d**2, cfg)
            if relation.dim != len(self.factors):
                raise DecompositionMismatch("embedded TL vectors are not independent")
            self.system = build_from_relation_space(
                self.big_d, relation, level, cfg, tl_free_product=True
            )
        self._embedded: dict[tuple[int, int], np.ndarray] = {}
        self._tails: dict[tuple[int, int], list[np.ndarray]] = {}

    def embedded_fibre(self, factor: int, legs: int) -> np.ndarray:
        """Basis of the factor fibre at the given level, in joint coordinates."""
        key = (factor, legs)
        if key not in self._embedded:
            fs = self.factor_systems[factor]
            if legs > fs.max_level:
                raise InsufficientLevels(f"factor {factor} built to {fs.max_level} < {legs}")
            self._embedded[key] = embed_basis(
                fs.fibres[legs].basis, self.d_list[factor], self.big_d, self.offsets[factor], legs
            )
        return self._embedded[key]

    def embedded_tl_vector(self, factor: int) -> np.ndarray:
        t = self.factors[factor]
        return embed_basis(
            t.v.reshape(-1, 1), t.d, self.big_d, self.offsets[factor], 2
        ).ravel()

    def _tail_masks(self, factor: int, m: int) -> list[np.ndarray]:
        """masks[t] selects words whose maximal factor-i suffix has length exactly t."""
        key = (factor, m)
        if key in self._tails:
            return self._tails[key]
        big = self.big_d
        off, width = self.offsets[factor], self.d_list[factor]
        idx = np.arange(big**m)
        tail = np.zeros(big**m, dtype=int)
        alive = np.ones(big**m, dtype=bool)
        for j in range(m - 1, -1, -1):
            letter = (idx // big ** (m - 1 - j)) % big
            alive &= (letter >= off) & (letter < off + width)
            tail += alive
        masks = [tail == t for t in range(m + 1)]
        self._tails[key] = masks
        return masks

    def w_apply(self, factor: int, m: int, cols: np.ndarray) -> np.ndarray:
        """Apply w^factor at level m to ambient columns: C^(D^m) -> C^(D^(m+2))."""
        big = self.big_d
        if cols.shape[0] != big**m:
            raise OutOfRange(f"expected ambient columns of length {big**m}")
        k = cols.shape[1]
        q = self.factors[factor].q
        two_q = q_number(2, q)
        v = self.embedded_tl_vector(factor)
        out = np.zeros((big ** (m + 2), k), dtype=complex)
        for t, mask in enumerate(self._tail_masks(factor, m)):
            if not mask.any():
                continue
            sub = cols * mask[:, None]
            if not np.any(sub):
                continue
            coeff = np.sqrt(two_q * phi(t + 1, q))
            block = np.einsum("ak,b->abk", sub, v).reshape(big ** (m - t), big ** (t + 1), big, k)
            bg = self.embedded_fibre(factor, t + 1)
            contracted = np.tensordot(bg.conj().T, block, axes=(1, 1))
            projected = np.tensordot(bg, contracted, axes=(1, 0))
            out += coeff * projected.transpose(1, 0, 2, 3).reshape(big ** (m + 2), k)
        return out

    def w_matrix(self, factor: int, m: int) -> np.ndarray:
        """w^factor at level m in fibre coordinates: (dim_{m+1} * D) x dim_m."""
        sys = self.system
        if m + 1 > sys.max_level:
            raise InsufficientLevels(f"need fibres to level {m + 1}")
        images = self.w_apply(factor, m, sys.fibres[m].basis)
        return _to_fibre_tensor_coords(images, sys.fibres[m + 1].basis, self.big_d)

    def iota_matrix(self, n: int) -> np.ndarray:
        """Inclusion of level n+1 into level n tensor level 1, in fibre coordinates."""
        sys = self.system
        if n + 1 > sys.max_level:
            raise InsufficientLevels(f"need fibres to level {n + 1}")
        return _to_fibre_tensor_coords(sys.fibres[n + 1].basis, sys.fibres[n].basis, self.big_d)

    def w_r(self, n: int, raise_on_failure: bool = True) -> WMaps:
        """Assemble W_n^R = (w^1, ..., w^r, iota_{n,1}) and verify unitarity."""
        if n < 1:
            raise OutOfRange("W_n^R is defined for n >= 1")
        blocks = tuple(self.w_matrix(i, n - 1) for i in range(len(self.factors)))
        iota = self.iota_matrix(n)
        w_full = np.hstack([*blocks, iota])
        tol = self.cfg.check_abs_tol

        iso = tuple(
            float(np.linalg.norm(b.conj().T @ b - np.eye(b.shape[1]))) for b in (*blocks, iota)
        )
        ortho = 0.0
        parts = [*blocks, iota]
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                ortho = max(ortho, float(np.linalg.norm(parts[i].conj().T @ parts[j])))
        rows, cols = w_full.shape
        left = float(np.linalg.norm(w_full.conj().T @ w_full - np.eye(cols)))
        right = float(np.linalg.norm(w_full @ w_full.conj().T - np.eye(rows))) if rows == cols else np.inf
        maps = WMaps(n, blocks, iota, w_full, iso, ortho, left, right)
        if raise_on_failure and maps.max_defect > tol:
            if max(iso) > tol:
                reason = f"isometry defect {max(iso):.2e}"
            elif ortho > tol:
                reason = f"range orthogonality defect {ortho:.2e}"
            else:
                reason = f"completeness defect {right:.2e}"
            raise NotUnitary(f"W_{n}^R fails: {reason}")
        return maps

    def compact_defect(self, factor: int, n: int) -> CompactDefect:
        """||(w_n^i - 1 ox w_{n-1}^i) f_n||^2 against the closed form.

        The difference operator vanishes off words lying entirely in factor
        i (the two branches agree term by term there), so the computation
        restricts to the factor's own alphabet.
        """
        if n < 1:
            raise InsufficientLevels("needs maps at levels n and n-1, so n >= 1")
        if n > self.system.max_level:
            raise InsufficientLevels(f"joint system built to {self.system.max_level} < {n}")
        t = self.factors[factor]
        local = self if len(self.factors) == 1 else FreeTLProduct([t], n, self.cfg)
        d_i = t.d
        rows = embed_indices(d_i, self.big_d, self.offsets[factor], n)
        m_block = self.system.fibres[n].basis[rows, :]

        img_n = local.w_apply(0, n, m_block)
        img_shift = np.zeros((d_i ** (n + 2), m_block.shape[1]), dtype=complex)
        sub_len = d_i ** (n - 1)
        for a in range(d_i):
            img_a = local.w_apply(0, n - 1, m_block[a * sub_len : (a + 1) * sub_len, :])
            img_shift[a * d_i ** (n + 1) : (a + 1) * d_i ** (n + 1), :] = img_a
        numeric = float(np.linalg.norm(img_n - img_shift, 2) ** 2)
        closed = 2.0 * (1.0 - np.sqrt(1.0 - q_number(n + 1, t.q) ** (-2)))
        return CompactDefect(factor, n, numeric, closed)


def _factor_system(t: TLSystem, level: int, cfg: ToleranceConfig) -> SubproductSystem:
    if t.system.max_level >= level:
        return t.system
    return build_from_relation_space(
        t.d, span(t.v.reshape(-1, 1), t.d**2, cfg), level, cfg, tl_free_product=True
    )


def _to_fibre_tensor_coords(images: np.ndarray, basis_out: np.ndarray, d: int) -> np.ndarray:
    """Convert ambient columns in C^(d^(m+2)) to (H_{m+1} ox H_1) coordinates."""
    amb, k = images.shape
    head = amb // d
    as3 = images.reshape(head, d, k)
    reduced = np.tensordot(basis_out.conj().T, as3, axes=(1, 0))
    return reduced.reshape(basis_out.shape[1] * d, k)


# ---------------------------------------------------------------------------
# module-level surface
# ---------------------------------------------------------------------------


def w_map_single(t: TLSystem, n: int, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """The isometry w_n: H_n -> H_{n+1} ox H_1 of a single TL system."""
    product = FreeTLProduct([t], max(n + 1, 2), cfg)
    return product.w_matrix(0, n)


def fusion_unitary_single(t: TLSystem, n: int, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """The square matrix (iota_{n,1}, w_{n-1}): H_{n+1} + H_{n-1} -> H_n ox H_1."""
    if n < 1:
        raise OutOfRange("fusion square needs n >= 1")
    product = FreeTLProduct([t], max(n + 1, 2), cfg)
    return np.hstack([product.iota_matrix(n), product.w_matrix(0, n - 1)])


def w_maps_free(
    t1: TLSystem,
    t2: TLSystem,
    n: int,
    product: FreeTLProduct | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> WMaps:
    """W_n^R for the free product of two TL systems; raises NotUnitary on failure."""
    if product is None:
        product = FreeTLProduct([t1, t2], n + 1, cfg)
    return product.w_r(n)


def compact_defect_norm(
    t1: TLSystem,
    t2: TLSystem,
    factor: int,
    n: int,
    product: FreeTLProduct | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Numeric ||(w_n^i - 1 ox w_{n-1}^i) f_n||^2, checked against the closed form."""
    if product is None:
        product = FreeTLProduct([t1, t2], n, cfg)
    cd = product.compact_defect(factor, n)
    if cd.agreement > cfg.check_abs_tol:
        raise DecompositionMismatch(
            f"compact defect {cd.numeric:.3e} deviates from closed form {cd.closed_form:.3e}"
        )
    return cd.numeric
