"""
Hadamard gate: parameters, closed-form outputs and the four-mode simulation
"""

_EXPORTS = {
    "GateParams": "catgate.gates.params",
    "GateResult": "catgate.gates.params",
    "IdealResourceGate": "catgate.gates.analytic",
    "SqueezedResourceGate": "catgate.gates.analytic",
    "heralding_x": "catgate.gates.analytic",
    "ideal_output": "catgate.gates.analytic",
    "limit_output": "catgate.gates.analytic",
    "optimal_heralding_x": "catgate.gates.analytic",
    "squeezed_resource_output": "catgate.gates.analytic",
    "y1_factor": "catgate.gates.analytic",
    "y2_factor": "catgate.gates.analytic",
    "z_factor": "catgate.gates.analytic",
    "BalancedWindow": "catgate.gates.realistic",
    "RealisticGate": "catgate.gates.realistic",
    "balance_window": "catgate.gates.realistic",
    "gate_map": "catgate.gates.realistic",
    "simulate_gate": "catgate.gates.realistic",
    "success_probability_dense": "catgate.gates.realistic",
}


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        return getattr(importlib.import_module(_EXPORTS[name]), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = sorted(_EXPORTS)
