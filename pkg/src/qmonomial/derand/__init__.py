"""Deterministic testing built from perfect hash families and a layered zero test for ABPs."""

from .abp import ABP, Label, abp_polynomial, circuit_to_abp, row_basis, rs_pit, symbolic_zero_oracle
from .dtm import coloring_constants, dtm_test
from .phf import PerfectHashFamily, build_phf, phf_size_bound, verify_phf

__all__ = [
    "ABP", "Label", "PerfectHashFamily", "abp_polynomial", "build_phf", "circuit_to_abp",
    "coloring_constants", "dtm_test", "phf_size_bound", "row_basis", "rs_pit",
    "symbolic_zero_oracle", "verify_phf",
]
