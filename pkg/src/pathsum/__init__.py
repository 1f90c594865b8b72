"""Symbolic sums-over-paths with exact arithmetic and unique normal forms."""

from .boolexpr import BoolExpr, Var, VarPool, eq_indicator
from .circuits import Circuit, CircuitError, build, parse_circuit
from .oracle import DenseMatrix, dense_matrix, matrices_equal
from .rewriting import (
    EquivalenceConfig,
    EquivalenceResult,
    NormalForm,
    RewriteStep,
    apply_rule,
    equivalent,
    normalize_field,
    normalize_ring,
    reduce_rewrite_first,
)
from .rexpr import Add, Const, Mul, NormalTable, Pow
from .rings import (
    CYC8_FIELD,
    DYADIC_CYC8,
    INT,
    RATIONAL,
    DOmega,
    ModInt,
    PrimeField,
    QOmega,
    Ring,
    ring_by_name,
)
from .sums import PathSum, compose, from_matrix, gate, tensor, to_state

__version__ = "0.1.0"

__all__ = [
    "Add",
    "BoolExpr",
    "CYC8_FIELD",
    "Circuit",
    "CircuitError",
    "Const",
    "DOmega",
    "DYADIC_CYC8",
    "DenseMatrix",
    "EquivalenceConfig",
    "EquivalenceResult",
    "INT",
    "ModInt",
    "Mul",
    "NormalForm",
    "NormalTable",
    "PathSum",
    "Pow",
    "PrimeField",
    "QOmega",
    "RATIONAL",
    "RewriteStep",
    "Ring",
    "Var",
    "VarPool",
    "apply_rule",
    "build",
    "compose",
    "dense_matrix",
    "eq_indicator",
    "equivalent",
    "from_matrix",
    "gate",
    "matrices_equal",
    "normalize_field",
    "normalize_ring",
    "parse_circuit",
    "reduce_rewrite_first",
    "ring_by_name",
    "tensor",
    "to_state",
]
