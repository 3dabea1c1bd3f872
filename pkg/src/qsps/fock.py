"""Truncated Fock spaces, Toeplitz operators, and the universal relation checks.

The Fock space of a system built to level N is the direct sum of its
fibres; operators are stored block-wise in fibre coordinates.  A Toeplitz
operator maps level n into level n+1 (the top level maps to zero under
truncation), so every relation is asserted only on input levels <= N-2
where truncation cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InsufficientLevels, NotTemperleyLieb, QOutOfRange
from .systems import SubproductSystem
from .tlnum import phi, solve_q

__all__ = [
    "TruncatedFock",
    "ToeplitzOp",
    "RelationReport",
    "build_fock",
    "toeplitz",
    "check_universal_relations",
]


@dataclass(frozen=True)
class TruncatedFock:
    """Direct sum of the fibres H_0 .. H_N in fibre coordinates."""

    system: SubproductSystem
    levels: int

    @property
    def dims(self) -> list[int]:
        return [self.system.fibres[n].dim for n in range(self.levels + 1)]

    @property
    def offsets(self) -> list[int]:
        out = [0]
        for d in self.dims:
            out.append(out[-1] + d)
        return out

    @property
    def total_dim(self) -> int:
        return self.offsets[-1]

    def level_slice(self, n: int) -> slice:
        off = self.offsets
        return slice(off[n], off[n + 1])

    def level_projector(self, n: int) -> np.ndarray:
        p = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        sl = self.level_slice(n)
        p[sl, sl] = np.eye(self.dims[n])
        return p

    def vacuum_projector(self) -> np.ndarray:
        return self.level_projector(0)

    def diagonal_function(self, values) -> np.ndarray:
        """The operator acting as values[n] on level n (an element of c)."""
        blocks = [np.full(self.dims[n], complex(values[n])) for n in range(self.levels + 1)]
        return np.diag(np.concatenate(blocks))


def build_fock(system: SubproductSystem, levels: int) -> TruncatedFock:
    if levels > system.max_level:
        raise InsufficientLevels(f"system built to {system.max_level}, need {levels}")
    if levels < 1:
        raise InsufficientLevels("need at least levels 0 and 1")
    return TruncatedFock(system, levels)


@dataclass(frozen=True)
class ToeplitzOp:
    """T_xi on the truncated Fock space: level n maps into level n+1."""

    fock: TruncatedFock
    symbol: np.ndarray
    blocks: tuple[np.ndarray, ...]  # blocks[n]: level n -> level n+1

    @property
    def matrix(self) -> np.ndarray:
        f = self.fock
        out = np.zeros((f.total_dim, f.total_dim), dtype=complex)
        for n, block in enumerate(self.blocks):
            out[f.level_slice(n + 1), f.level_slice(n)] = block
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-free action, available when the dense matrix is too large."""
        f = self.fock
        out = np.zeros(f.total_dim, dtype=complex)
        for n, block in enumerate(self.blocks):
            out[f.level_slice(n + 1)] = block @ vec[f.level_slice(n)]
        return out


def toeplitz(fock: TruncatedFock, xi: np.ndarray) -> ToeplitzOp:
    """T_xi zeta = f_{n+1}(xi tensor zeta); the top level is annihilated."""
    system = fock.system
    xi = np.asarray(xi, dtype=complex).ravel()
    if xi.size != system.d:
        raise ValueError(f"symbol must live in C^{system.d}")
    blocks = []
    for n in range(fock.levels):
        bn = system.fibres[n].basis
        bn1 = system.fibres[n + 1].basis
        # image of each fibre basis vector: project xi tensor (ambient column)
        blocks.append(bn1.conj().T @ np.kron(xi.reshape(-1, 1), bn))
    return ToeplitzOp(fock, xi, tuple(blocks))


def toeplitz_tuple(fock: TruncatedFock) -> list[ToeplitzOp]:
    """The shifts T_1 .. T_d for the standard basis of H_1."""
    d = fock.system.d
    return [toeplitz(fock, np.eye(d)[:, i]) for i in range(d)]


@dataclass(frozen=True)
class RelationResidual:
    name: str
    residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "max_residual": self.residual, "passed": self.passed}


@dataclass(frozen=True)
class RelationReport:
    """Machine-readable record of the universal-relation residuals."""

    q: float
    levels: int
    zone_max_level: int
    tolerance: float
    relations: tuple[RelationResidual, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.relations)

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.relations)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "levels": self.levels,
            "zone_max_level": self.zone_max_level,
            "tolerance": self.tolerance,
            "relations": [r.to_dict() for r in self.relations],
            "all_passed": self.all_passed,
        }


def _zone_norm(fock: TruncatedFock, op: np.ndarray, zone: int) -> float:
    """Operator norm of op restricted to input levels <= zone."""
    cols = fock.offsets[zone + 1]
    if cols == 0:
        return 0.0
    return float(np.linalg.norm(op[:, :cols], 2))


def check_universal_relations(
    fock: TruncatedFock,
    a: np.ndarray,
    q: float | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    require_tl: bool = True,
) -> RelationReport:
    """Residuals of the four universal Toeplitz relations on the safe zone.

    The coefficient matrix a must be normalised so that a conj(a) is unitary
    and q must solve Tr(a^H a) = q + 1/q; both are validated unless
    require_tl=False (diagnostic mode, where q must then be supplied).
    """
    a = np.asarray(a, dtype=complex)
    d = fock.system.d
    if a.shape != (d, d):
        raise ValueError(f"coefficient matrix must be {d} x {d}")
    m = a @ a.conj()
    tl_defect = float(np.linalg.norm(m.conj().T @ m - np.eye(d)))
    if require_tl:
        if tl_defect > cfg.check_abs_tol:
            raise NotTemperleyLieb(f"A conj(A) is not unitary (defect {tl_defect:.2e})")
        trace = float(np.trace(a.conj().T @ a).real)
        q_solved = solve_q(trace, cfg)
        if q is None:
            q = q_solved
        elif not 0 < q <= 1 or abs(q + 1 / q - trace) > 100 * cfg.check_abs_tol:
            raise QOutOfRange(f"q={q} does not solve q + 1/q = Tr(A^H A) = {trace}")
    elif q is None:
        raise QOutOfRange("q must be given explicitly when require_tl=False")

    n_levels = fock.levels
    zone = n_levels - 2
    if zone < 0:
        raise InsufficientLevels("need at least two levels above the zone")
    shifts = toeplitz_tuple(fock)
    t = [op.matrix for op in shifts]
    t_adj = [mat.conj().T for mat in t]
    total = fock.total_dim
    identity = np.eye(total)

    # (i) sum a_ij S_i S_j = 0
    quad = sum(a[i, j] * (t[i] @ t[j]) for i in range(d) for j in range(d))
    res_quad = _zone_norm(fock, quad, zone)

    # (ii) sum_i S_i S_i^* = 1 - e_0
    ssum = sum(t[i] @ t_adj[i] for i in range(d))
    res_vac = _zone_norm(fock, identity - fock.vacuum_projector() - ssum, zone)

    # (iii) S_i^* S_j + phi sum_kl a_ik conj(a_jl) S_k S_l^* = delta_ij
    phi_op = fock.diagonal_function([phi(n, q) for n in range(n_levels + 1)])
    products = [[t[k] @ t_adj[l] for l in range(d)] for k in range(d)]
    res_comm = 0.0
    for i in range(d):
        for j in range(d):
            mix = sum(
                a[i, k] * np.conj(a[j, l]) * products[k][l] for k in range(d) for l in range(d)
            )
            lhs = t_adj[i] @ t[j] + phi_op @ mix - (identity if i == j else 0)
            res_comm = max(res_comm, _zone_norm(fock, lhs, zone))

    # (iv) f S_i = S_i gamma(f) for level indicators f = e_m
    res_shift = 0.0
    for mlevel in range(n_levels + 1):
        em = fock.level_projector(mlevel)
        gamma_em = fock.level_projector(mlevel - 1) if mlevel >= 1 else np.zeros_like(em)
        for i in range(d):
            res_shift = max(res_shift, _zone_norm(fock, em @ t[i] - t[i] @ gamma_em, zone))

    tol = cfg.check_abs_tol
    relations = (
        RelationResidual("quadratic_relation", res_quad, res_quad <= tol),
        RelationResidual("vacuum_identity", res_vac, res_vac <= tol),
        RelationResidual("commutation_phi", res_comm, res_comm <= tol),
        RelationResidual("shift_covariance", res_shift, res_shift <= tol),
    )
    return RelationReport(float(q), n_levels, zone, tol, relations)
