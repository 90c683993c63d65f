"""
Run configuration: JSON file validated by pydantic models before any
computation. Unknown keys are rejected.
"""

import json
import math
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from catgate.detectors.measurements import DEFAULT_P_DARK, DetectorSpec
from catgate.errors import ConfigError
from catgate.gates.params import (
    DEFAULT_ALPHA,
    DEFAULT_CUTOFFS,
    DEFAULT_NBAR,
    DEFAULT_R_ABS1_2,
    DEFAULT_R_ABS2_2,
    DEFAULT_SQUEEZING_DB,
    DEFAULT_T_BS2,
    GateParams,
)
from catgate.states.constructors import CsqSpec, ResourceSpec, db_to_s


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DetectorConfig(_Section):
    eta_apd: float = Field(0.25, ge=0, le=1, description="APD efficiency")
    p_dark: float = Field(DEFAULT_P_DARK, ge=0, le=1, description="Dark-count probability per slot")
    eta_hd: float = Field(0.77, ge=0, le=1, description="Homodyne efficiency")
    x0: float = Field(0.4, description="Heralding window centre")
    delta: float = Field(0.02, gt=0, description="Heralding window width")


class ResourceConfig(_Section):
    kind: Literal["squeezed", "cat"] = Field("squeezed", description="Squeezed thermal state or ideal even cat")
    squeezing_db: float = Field(DEFAULT_SQUEEZING_DB, ge=0, description="Squeezing of the resource in dB")
    nbar: float = Field(DEFAULT_NBAR, ge=0, description="Thermal occupation before squeezing")


class CutoffConfig(_Section):
    input: int = Field(DEFAULT_CUTOFFS[0], ge=2)
    input_tap: int = Field(DEFAULT_CUTOFFS[1], ge=2)
    apd: int = Field(DEFAULT_CUTOFFS[2], ge=2)
    output: int = Field(DEFAULT_CUTOFFS[3], ge=2)


class GateConfig(_Section):
    alpha: float = Field(..., gt=0, description="CSQ amplitude")
    model: Literal["ideal-resource", "squeezed-resource", "realistic"] = Field("realistic", description="Gate model")
    t_bs2: float = Field(DEFAULT_T_BS2, ge=0, le=1, description="BS intensity transmittance")
    r_abs1_2: float = Field(DEFAULT_R_ABS1_2, ge=0, le=1, description="Input tap reflectance")
    r_abs2_2: float = Field(DEFAULT_R_ABS2_2, ge=0, le=1, description="Resource tap reflectance")
    output_phase: float = Field(math.pi, description="Phase rotation applied to the output mode")


class InputConfig(_Section):
    theta: float = Field(0.0, ge=0, le=math.pi / 2, description="u = cos(theta)")
    phi: float = Field(0.0, description="Relative phase of v")


class GridConfig(_Section):
    n_theta: int = Field(33, ge=1)
    n_phi: int = Field(33, ge=1)


class CurveConfig(_Section):
    alpha_min: float = Field(0.1, gt=0, le=2)
    alpha_max: float = Field(2.0, gt=0, le=2)
    alpha_step: float = Field(0.1, gt=0)
    t: float = Field(0.0, ge=0, lt=1, description="BS amplitude transmittance, 0 for the t << r limit")
    metric: Literal["basis_average", "worst", "bloch"] = "basis_average"


class WignerConfig(_Section):
    extent: float = Field(4.0, gt=0)
    points: int = Field(161, ge=2)


class TomographyConfig(_Section):
    state: Literal["odd_cat", "even_cat", "gate_output"] = Field("odd_cat", description="State to sample")
    target_alpha: float = Field(0.75, gt=0, description="Cat amplitude for cat states")
    eta: float = Field(0.77, ge=0, le=1, description="Detection efficiency of the sampled data")
    eta_correction: float = Field(0.77, gt=0, le=1, description="Efficiency folded into the reconstruction")
    n_samples: int = Field(200_000, ge=1)
    phases: int = Field(12, ge=1)
    cutoff: int = Field(12, ge=2)
    max_iter: int = Field(500, ge=1)
    dataset: str = Field("quadratures.tsv", description="Dataset file name inside the output directory")


class RunConfig(_Section):
    gate: GateConfig
    detectors: DetectorConfig = Field(default_factory=DetectorConfig)
    resource: ResourceConfig = Field(default_factory=ResourceConfig)
    cutoffs: CutoffConfig = Field(default_factory=CutoffConfig)
    input: InputConfig = Field(default_factory=InputConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    curve: CurveConfig = Field(default_factory=CurveConfig)
    wigner: WignerConfig = Field(default_factory=WignerConfig)
    tomography: TomographyConfig = Field(default_factory=TomographyConfig)
    seed: Optional[int] = None
    out: str = "."
    threads: int = Field(1, ge=1)

    def to_gate_params(self) -> GateParams:
        g, d, r, c = self.gate, self.detectors, self.resource, self.cutoffs
        return GateParams(
            alpha=g.alpha,
            t_bs2=g.t_bs2,
            r_abs1_2=g.r_abs1_2,
            r_abs2_2=g.r_abs2_2,
            resource=ResourceSpec(s=db_to_s(r.squeezing_db), nbar=r.nbar, kind=r.kind),
            detectors=DetectorSpec(d.eta_apd, d.p_dark, d.eta_hd, d.x0, d.delta),
            cutoffs=(c.input, c.input_tap, c.apd, c.output),
            output_phase=g.output_phase,
        )

    def input_spec(self) -> CsqSpec:
        return CsqSpec(self.gate.alpha, self.input.theta, self.input.phi)


def _describe(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err["loc"])
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {_describe(e)}") from e


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Read and validate a JSON config; without a file the defaults apply"""
    if path is None:
        return parse_config({"gate": {"alpha": DEFAULT_ALPHA}})
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config ({e})") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return parse_config(data)
