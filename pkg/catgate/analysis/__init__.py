"""
Figures of merit and parameter sweeps
"""

_EXPORTS = {
    "best_hadamard_alpha": "catgate.analysis.figures",
    "best_target_alpha": "catgate.analysis.figures",
    "default_wigner_axes": "catgate.analysis.figures",
    "fidelity": "catgate.analysis.figures",
    "wigner": "catgate.analysis.figures",
    "wigner_grid": "catgate.analysis.figures",
    "wigner_origin": "catgate.analysis.figures",
    "BlochGrid": "catgate.analysis.sweeps",
    "CurveRow": "catgate.analysis.sweeps",
    "basis_fidelities": "catgate.analysis.sweeps",
    "bloch_sweep": "catgate.analysis.sweeps",
    "fidelity_curve": "catgate.analysis.sweeps",
    "optimal_squeezing": "catgate.analysis.sweeps",
    "bloch_axes": "catgate.analysis.sweeps",
    "entangled_output": "catgate.analysis.sweeps",
    "entangled_target": "catgate.analysis.sweeps",
    "gate_fidelity": "catgate.analysis.sweeps",
    "process_fidelity": "catgate.analysis.sweeps",
    "process_fidelity_and_rate": "catgate.analysis.sweeps",
}


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        return getattr(importlib.import_module(_EXPORTS[name]), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = sorted(_EXPORTS)
