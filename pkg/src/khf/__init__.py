"""Exact-arithmetic engine for invariant forms on small-rank flag
manifolds: root systems, Weyl combinatorics, the invariant complex and
its harmonic basis, equivariant evaluation matrices, Schubert structure
constants, and certified metric-deformation limits."""

__version__ = "0.1.0"
