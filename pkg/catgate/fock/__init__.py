"""
Truncated Fock-space linear algebra
"""

from catgate.fock.core import (
    DEFAULT_MAX_DIM,
    LEAKAGE_TOL,
    DensityOperator,
    FockKet,
    ModeOperator,
    OperatorKind,
    annihilation,
    apply_operator,
    apply_unitary,
    basis_ket,
    check_leakage,
    conjugate_by,
    expect,
    identity,
    mode_populations,
    number_operator,
    partial_trace,
    population_leakage,
    tensor,
    tensor_all,
    truncation_leakage,
)

__all__ = [
    "DEFAULT_MAX_DIM",
    "LEAKAGE_TOL",
    "DensityOperator",
    "FockKet",
    "ModeOperator",
    "OperatorKind",
    "annihilation",
    "apply_operator",
    "apply_unitary",
    "basis_ket",
    "check_leakage",
    "conjugate_by",
    "expect",
    "identity",
    "mode_populations",
    "number_operator",
    "partial_trace",
    "population_leakage",
    "tensor",
    "tensor_all",
    "truncation_leakage",
]
