"""
Factory for creating gate model instances
"""

from catgate.base import GateModel


def _get_ideal_resource():
    """Lazy import for IdealResourceGate"""
    from catgate.gates.analytic import IdealResourceGate
    return IdealResourceGate


def _get_squeezed_resource():
    """Lazy import for SqueezedResourceGate"""
    from catgate.gates.analytic import SqueezedResourceGate
    return SqueezedResourceGate


def _get_realistic():
    """Lazy import for RealisticGate"""
    from catgate.gates.realistic import RealisticGate
    return RealisticGate


# Registry of available gate models (using lazy loaders)
GATE_MODELS = {
    "ideal-resource": _get_ideal_resource,
    "ideal_resource": _get_ideal_resource,
    "squeezed-resource": _get_squeezed_resource,
    "squeezed_resource": _get_squeezed_resource,
    "realistic": _get_realistic,
}


def get_gate_model(model_name: str, **kwargs) -> GateModel:
    """
    Factory function to create gate model instances

    Args:
        model_name: Name of the model ('ideal-resource', 'squeezed-resource' or 'realistic')
        **kwargs: Additional arguments to pass to the model constructor

    Returns:
        Gate model instance, not yet initialized
    """
    model_name = model_name.lower().strip()

    if model_name not in GATE_MODELS:
        available = ", ".join(GATE_MODELS.keys())
        raise ValueError(
            f"Unknown gate model: {model_name}. Available models: {available}"
        )

    model_loader = GATE_MODELS[model_name]
    model_class = model_loader()
    return model_class(**kwargs)


def list_available_models() -> list:
    """Get list of available gate model names"""
    return list(GATE_MODELS.keys())
