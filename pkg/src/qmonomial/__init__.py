"""q-monomial detection in arithmetic circuits over group algebras.

Randomized testing (``rtm_test``) evaluates a transformed circuit over
GF(2^d)[Z_2^k]; deterministic testing (``dtm_test``) replaces the random
choices with a perfect hash family and an ABP zero test.
"""

__version__ = "0.1.0"

from .algebra import AlgElem, FieldCtx, alg_mul, alg_span_product, make_field
from .apps import (
    Graph, SetSystem, ZeroPolynomial, build_kpath_circuit, build_setpack_circuit, kpath_oracle,
    p2_to_sets, p2pack_oracle, setpack_oracle,
)
from .circuit import Circuit, CircuitBuilder, expand, load_circuit, parse_circuit, q_monomial_oracle
from .derand import build_phf, dtm_test, rs_pit, verify_phf
from .errors import (
    BudgetError, CapError, CircuitFormatError, ExpansionTooLarge, InputFormatError, ParameterError,
    QMonomialError, StructureError,
)
from .rtm import TestParams, TestReport, rtm_test
from .transform import transform_full

__all__ = [
    "AlgElem", "BudgetError", "CapError", "Circuit", "CircuitBuilder", "CircuitFormatError",
    "ExpansionTooLarge", "FieldCtx", "Graph", "InputFormatError", "ParameterError",
    "QMonomialError", "SetSystem", "StructureError", "TestParams", "TestReport", "ZeroPolynomial",
    "alg_mul", "alg_span_product", "build_kpath_circuit", "build_phf", "build_setpack_circuit",
    "dtm_test", "expand", "kpath_oracle", "load_circuit", "make_field", "p2_to_sets",
    "p2pack_oracle", "parse_circuit", "q_monomial_oracle", "rs_pit", "rtm_test", "setpack_oracle",
    "transform_full", "verify_phf",
]
