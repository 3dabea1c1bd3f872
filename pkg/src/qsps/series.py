"""Hilbert series: graded dimension sequences and truncated power-series arithmetic.

All arithmetic is exact over Python integers.  A series is represented by
its coefficient list delta_0 .. delta_N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonUnitalSeries, OutOfRange


@dataclass(frozen=True)
class HilbertSeries:
    """Truncated series sum(delta_n z^n), delta_0 = 1.

    Coefficients of series attached to actual systems are nonnegative;
    formal recurrences (generic_series with many relations) may go negative.
    """

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs or coeffs[0] != 1:
            raise NonUnitalSeries("Hilbert series must start with constant term 1")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def level(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> int:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def truncate(self, n: int) -> "HilbertSeries":
        return HilbertSeries(self.coefficients[: n + 1])


def geq(h1: HilbertSeries, h2: HilbertSeries) -> bool:
    """Coefficient-wise h1 >= h2 on the common truncation."""
    n = min(h1.level, h2.level)
    return all(h1[k] >= h2[k] for k in range(n + 1))


def generic_recurrence(d: int, r: int, level: int) -> list[int]:
    """delta_0 = 1, delta_1 = d, delta_{n+1} = d*delta_n - r*delta_{n-1} (raw, may go negative)."""
    if level < 0:
        raise OutOfRange("level must be nonnegative")
    out = [1]
    if level >= 1:
        out.append(d)
    for _ in range(2, level + 1):
        out.append(d * out[-1] - r * out[-2])
    return out


def generic_series(d: int, r: int, level: int) -> HilbertSeries:
    """Truncated expansion of (1 - d z + r z^2)^{-1}."""
    return HilbertSeries(tuple(generic_recurrence(d, r, level)))


def anick_lower_bound(d: int, r: int, level: int) -> HilbertSeries:
    """|(1 - d z + r z^2)^{-1}|: run the recurrence and delete from the first negative term on."""
    raw = generic_recurrence(d, r, level)
    out = []
    for c in raw:
        if c < 0:
            break
        out.append(c)
    out.extend([0] * (level + 1 - len(out)))
    return HilbertSeries(tuple(out))


def invert_series(coeffs: list[int], level: int) -> list[int]:
    """Multiplicative inverse of a unital integer series, truncated at level."""
    if not coeffs or coeffs[0] != 1:
        raise NonUnitalSeries("can only invert series with constant term 1")
    a = list(coeffs) + [0] * (level + 1 - len(coeffs))
    b = [1] + [0] * level
    for n in range(1, level + 1):
        b[n] = -sum(a[j] * b[n - j] for j in range(1, n + 1))
    return b


def invert_series_rational(coeffs, level: int) -> list[Fraction]:
    """Inverse of a series with any nonzero constant term, exact over rationals."""
    a = [Fraction(c) for c in coeffs] + [Fraction(0)] * (level + 1 - len(coeffs))
    if a[0] == 0:
        raise NonUnitalSeries("constant term must be nonzero")
    b = [1 / a[0]] + [Fraction(0)] * level
    for n in range(1, level + 1):
        b[n] = -sum(a[j] * b[n - j] for j in range(1, n + 1)) / a[0]
    return b
