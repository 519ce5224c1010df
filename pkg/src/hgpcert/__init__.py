"""GF(2) tools for hypergraph product codes and Clifford-restriction certificates."""

from .codes import ClassicalCode, is_puncture, is_robust
from .f2core import BitMatrix, cokernel, kernel, kron, row_reduce
from .hgp import HgpCode, logical_basis, product, sector
from .transversal import certify, verify_certificate

__all__ = [
    "BitMatrix",
    "ClassicalCode",
    "HgpCode",
    "certify",
    "cokernel",
    "is_puncture",
    "is_robust",
    "kernel",
    "kron",
    "logical_basis",
    "product",
    "row_reduce",
    "sector",
    "verify_certificate",
]

__version__ = "0.1.0"
