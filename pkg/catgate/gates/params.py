"""
Gate parameters and results
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from catgate.detectors.measurements import DetectorSpec
from catgate.fock.core import LEAKAGE_TOL, DensityOperator
from catgate.optics.ops import BeamSplitterSpec
from catgate.states.constructors import CsqSpec, ResourceSpec, db_to_s

# Operating point of the experiment
DEFAULT_ALPHA = 0.8
DEFAULT_T_BS2 = 0.25
DEFAULT_R_ABS1_2 = 0.015    # input tap
DEFAULT_R_ABS2_2 = 0.075    # resource tap
DEFAULT_SQUEEZING_DB = 2.6
DEFAULT_NBAR = 0.03
DEFAULT_CUTOFFS = (16, 6, 6, 16)

# Mode numbering of the four-mode simulation (0-based)
MODE_INPUT, MODE_INPUT_TAP, MODE_APD, MODE_RESOURCE = range(4)
MODE_OUTPUT = MODE_RESOURCE


@dataclass(frozen=True)
class GateParams:
    """Every physical parameter of the gate"""

    alpha: float = DEFAULT_ALPHA
    t_bs2: float = DEFAULT_T_BS2
    r_abs1_2: float = DEFAULT_R_ABS1_2
    r_abs2_2: float = DEFAULT_R_ABS2_2
    resource: ResourceSpec = field(
        default_factory=lambda: ResourceSpec(s=db_to_s(DEFAULT_SQUEEZING_DB), nbar=DEFAULT_NBAR)
    )
    detectors: DetectorSpec = field(default_factory=DetectorSpec)
    cutoffs: tuple = DEFAULT_CUTOFFS
    # static phase rotation on the output mode; pi flips the odd-cat sign
    output_phase: float = float(np.pi)
    leakage_tol: float = LEAKAGE_TOL

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        for name in ("t_bs2", "r_abs1_2", "r_abs2_2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        cutoffs = tuple(int(c) for c in self.cutoffs)
        if len(cutoffs) != 4 or min(cutoffs) < 2:
            raise ValueError(f"cutoffs must be four integers >= 2, got {self.cutoffs}")
        object.__setattr__(self, "cutoffs", cutoffs)

    @property
    def t_bs(self) -> float:
        return float(np.sqrt(self.t_bs2))

    @property
    def r_bs(self) -> float:
        return float(np.sqrt(1.0 - self.t_bs2))

    def abs1(self) -> BeamSplitterSpec:
        """Input tap, couples the input into its vacuum tap mode"""
        return BeamSplitterSpec.from_reflectance(self.r_abs1_2, modes=(MODE_INPUT, MODE_INPUT_TAP))

    def abs2(self) -> BeamSplitterSpec:
        """Resource tap, couples the APD mode with the resource"""
        return BeamSplitterSpec.from_reflectance(self.r_abs2_2, modes=(MODE_APD, MODE_RESOURCE))

    def bs(self) -> BeamSplitterSpec:
        """Mixes the two taps in front of the APD"""
        return BeamSplitterSpec.from_transmittance(self.t_bs2, modes=(MODE_INPUT_TAP, MODE_APD))

    def replace(self, **changes) -> "GateParams":
        return replace(self, **changes)

    def with_window(self, x0: float, delta: Optional[float] = None) -> "GateParams":
        return replace(self, detectors=self.detectors.with_window(x0, delta))

    @classmethod
    def ideal_detectors(cls, **changes) -> "GateParams":
        """Unit efficiencies, no dark counts"""
        base = cls(**changes)
        det = base.detectors
        return replace(base, detectors=DetectorSpec(1.0, 0.0, 1.0, det.x0, det.delta))


@dataclass(frozen=True)
class GateResult:
    """Conditioned single-mode output of one gate run"""

    rho_out: DensityOperator
    p_success: Optional[float]
    fidelity_vs_ideal: float
    spec: CsqSpec
    target_alpha_opt: Optional[float] = None
    fidelity_fitted: Optional[float] = None
    truncation_warning: bool = False
    model: str = ""
