"""Exact computations in quasi-Coxeter groups: extended affine Weyl groups,
alcove geometry, a certificate-producing diamond search and Hecke algebra
centres."""

__version__ = "0.1.0"
