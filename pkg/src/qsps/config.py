"""Numerical tolerances and the dense-construction budget."""

from __future__ import annotations

import os
from dataclasses import dataclass

#: Hard cap on the ambient dimension d**N of any dense fibre construction.
#: Override with the SPS_MAX_AMBIENT environment variable.
DEFAULT_MAX_AMBIENT = 2_000_000

#: Levels are never grown past this even when d**N stays tiny (d = 1 systems).
MAX_DEFAULT_LEVEL = 24


@dataclass(frozen=True)
class ToleranceConfig:
    """Rank and residual tolerances used by every numerical decision.

    rank_rel_tol decides ranks: singular values below rank_rel_tol times the
    largest one are treated as zero.  check_abs_tol bounds residuals in all
    verification predicates (containment, unitarity, relation checks).
    """

    rank_rel_tol: float = 1e-10
    check_abs_tol: float = 1e-8

    def __post_init__(self):
        if self.rank_rel_tol <= 0 or self.check_abs_tol <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


#: Cap on dense matrix elements allocated by one construction step (~2 GiB complex).
DEFAULT_MAX_DENSE_ELEMENTS = 134_217_728


def max_ambient() -> int:
    value = os.environ.get("SPS_MAX_AMBIENT")
    if value is None:
        return DEFAULT_MAX_AMBIENT
    return int(value)


def max_dense_elements() -> int:
    value = os.environ.get("SPS_MAX_DENSE_ELEMENTS")
    if value is None:
        return DEFAULT_MAX_DENSE_ELEMENTS
    return int(value)


def default_max_level(d: int, budget: int | None = None) -> int:
    """Largest N with d**N within the ambient budget, capped at MAX_DEFAULT_LEVEL."""
    if d < 1:
        raise ValueError("alphabet size must be at least 1")
    limit = budget if budget is not None else max_ambient()
    n = 0
    while n < MAX_DEFAULT_LEVEL and d ** (n + 1) <= limit:
        n += 1
    return n


def check_budget(d: int, level: int, budget: int | None = None) -> None:
    """Raise BudgetExceeded when d**level does not fit the ambient budget."""
    from .errors import BudgetExceeded

    limit = budget if budget is not None else max_ambient()
    if d**level > limit:
        raise BudgetExceeded(f"ambient dimension {d}**{level} exceeds budget {limit}")
