"""
catgate - Truncated Fock-space simulation of a probabilistic Hadamard gate
for coherent-state qubits
"""

from catgate.base import GateModel
from catgate.factory import get_gate_model, list_available_models
from catgate.gates.params import GateParams, GateResult
from catgate.states.constructors import CsqSpec, ResourceSpec

__version__ = "0.1.0"
__all__ = [
    "CsqSpec",
    "GateModel",
    "GateParams",
    "GateResult",
    "ResourceSpec",
    "get_gate_model",
    "list_available_models",
]
