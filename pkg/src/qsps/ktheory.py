"""K-groups of the Toeplitz and Cuntz-Pimsner algebras via the Euler class.

For systems in the validated class (free products of Temperley-Lieb
systems, including the multiplicity-free SU_q(2) ones), the Gysin sequence
collapses K-theory to the cokernel and kernel of multiplication by the
integer Euler class chi = 1 - dim H_1 + dim H_2^perp on Z.  Other systems
get the same integer output flagged as outside the proven hypotheses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .systems import SubproductSystem

HYPOTHESES_OK = "tl-free-product"
HYPOTHESES_FLAG = "outside-proven-hypotheses"


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus sorted torsion orders."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion orders must be at least 2")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    def render(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": self.render()}


TRIVIAL = AbelianGroup(0)
Z = AbelianGroup(1)


def cyclic_cokernel(chi: int) -> AbelianGroup:
    """coker(x chi : Z -> Z) = Z/|chi| (Z itself when chi = 0)."""
    if chi == 0:
        return Z
    m = abs(chi)
    return TRIVIAL if m == 1 else AbelianGroup(0, (m,))


def cyclic_kernel(chi: int) -> AbelianGroup:
    """ker(x chi : Z -> Z): Z when chi = 0, trivial otherwise."""
    return Z if chi == 0 else TRIVIAL


@dataclass(frozen=True)
class KGroups:
    k0: AbelianGroup
    k1: AbelianGroup
    euler: int
    hypotheses: str

    def to_dict(self) -> dict:
        return {
            "k0": self.k0.to_dict(),
            "k1": self.k1.to_dict(),
            "euler_class": self.euler,
            "hypotheses": self.hypotheses,
        }


def euler_class(system: SubproductSystem) -> int:
    """chi = 1 - dim H_1 + dim H_2^perp = 1 - d + r."""
    return 1 - system.d + system.r


def _flag(system: SubproductSystem) -> str:
    return HYPOTHESES_OK if system.tl_free_product else HYPOTHESES_FLAG


def cuntz_pimsner_kgroups(system: SubproductSystem) -> KGroups:
    """K-theory of the Cuntz-Pimsner algebra from the Gysin sequence."""
    chi = euler_class(system)
    return KGroups(cyclic_cokernel(chi), cyclic_kernel(chi), chi, _flag(system))


def toeplitz_kgroups(system: SubproductSystem) -> KGroups:
    """K-theory of the Toeplitz algebra: that of the complex numbers."""
    return KGroups(Z, TRIVIAL, euler_class(system), _flag(system))
