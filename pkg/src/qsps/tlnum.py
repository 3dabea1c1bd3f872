"""q-numbers and the deformation parameter: shared by the Fock and TL modules."""

from __future__ import annotations

import math

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import OutOfRange, TraceBelowTwo


def q_number(n: int, q: float) -> float:
    """[n]_q = (q^n - q^-n) / (q - q^-1), with the q = 1 limit [n]_1 = n."""
    if n < 0:
        raise OutOfRange("q-numbers are defined for n >= 0")
    if not 0 < q <= 1:
        raise OutOfRange(f"q must lie in (0, 1], got {q}")
    if q == 1.0:
        return float(n)
    log_q = math.log(q)
    return math.sinh(n * log_q) / math.sinh(log_q)


def phi(n: int, q: float) -> float:
    """phi(n) = [n]_q / [n+1]_q; phi(0) = 0 and phi(n) -> q as n grows."""
    return q_number(n, q) / q_number(n + 1, q)


def solve_q(trace: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """The q in (0, 1] with q + 1/q = trace; trace must be at least 2."""
    if trace < 2 - cfg.check_abs_tol:
        raise TraceBelowTwo(f"no real q solves q + 1/q = {trace}")
    if trace <= 2 + 1e-12:  # clamp roundoff from the normalisation chain
        return 1.0
    return (trace - math.sqrt(trace * trace - 4)) / 2
