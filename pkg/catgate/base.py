"""
Base interface for gate models
"""

from abc import ABC, abstractmethod
from typing import Iterable, List, Optional

from catgate.gates.params import GateParams, GateResult
from catgate.states.constructors import CsqSpec


class GateModel(ABC):
    """Base class for all Hadamard gate models"""

    def __init__(self, model_name: str, params: Optional[GateParams] = None):
        """
        Initialize gate model

        Args:
            model_name: Name/identifier of the model
            params: Physical parameters, default operating point if omitted
        """
        self.model_name = model_name
        self.params = params if params is not None else GateParams()
        self._initialized = False

    @abstractmethod
    def initialize(self):
        """Precompute everything that depends only on the parameters"""
        pass

    @abstractmethod
    def run(self, spec: CsqSpec) -> GateResult:
        """
        Send one coherent-state qubit through the gate

        Args:
            spec: Input qubit

        Returns:
            Conditioned output with its fidelity against the Hadamard image
        """
        pass

    def run_batch(self, specs: Iterable[CsqSpec]) -> List[GateResult]:
        if not self._initialized:
            self.initialize()
        return [self.run(spec) for spec in specs]

    def describe(self) -> dict:
        """Summary of the model and its operating point"""
        p = self.params
        return {
            "model": self.model_name,
            "alpha": p.alpha,
            "t_bs2": p.t_bs2,
            "squeezing_db": p.resource.db,
            "nbar": p.resource.nbar,
            "resource": p.resource.kind,
        }

    def is_initialized(self) -> bool:
        """Check if model is initialized"""
        return self._initialized

    def __enter__(self):
        """Context manager entry"""
        if not self._initialized:
            self.initialize()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit"""
        pass
