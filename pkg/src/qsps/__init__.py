"""qsps: quadratic subproduct systems of Hilbert spaces.

Build subproduct systems from ideals of noncommutative quadratic
polynomials, compute their Fock-space Toeplitz operators and free products,
verify Temperley-Lieb relation systems, and read off the K-theory of the
associated Cuntz-Pimsner algebras.
"""

__version__ = "0.1.0"
