"""Exact Hochschild and cyclic homology of finite-dimensional commutative algebras.

Submodules:

- ``linalg``: sparse exact linear algebra over Q and Q(t)
- ``algebra``: algebras by structure constants, tensor products, slices
- ``complexes``: Hochschild, cyclic and mixed complexes
- ``adams``: Adams operations and Hodge projectors
- ``sbi``: the periodicity sequence on chains
- ``differentials``: Kähler forms, de Rham cohomology, comparison maps
- ``relative``: relative invariants of R (x) A over R
- ``chow``: Hodge tables and the formal Chow calculator
"""
from .algebra import (FinCommAlgebra, GradedPolySlice, augmentation_ideal, builtin_algebra,
                      make_truncated_poly, resolve_algebra, tensor, validate)
from .complexes import (bar_complex, cyclic_bicomplex, cyclic_dims, cyclic_homology,
                        hochschild_dims, hochschild_homology, mixed_complex)
from .errors import CychomError, InputError, VerdictFailure
from .scalars import QQ, QQT, RationalFunction

__version__ = "0.1.0"

__all__ = [
    "FinCommAlgebra", "GradedPolySlice", "augmentation_ideal", "builtin_algebra",
    "make_truncated_poly", "resolve_algebra", "tensor", "validate",
    "bar_complex", "cyclic_bicomplex", "cyclic_dims", "cyclic_homology",
    "hochschild_dims", "hochschild_homology", "mixed_complex",
    "CychomError", "InputError", "VerdictFailure", "QQ", "QQT", "RationalFunction",
]
