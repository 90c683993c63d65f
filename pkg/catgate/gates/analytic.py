"""
Closed-form gate outputs.

With the ideal cat resource the heralded output is

    u cat+ + Y1 (u + v Z) cat-,      Y1 = (t / 2r) sqrt(N- / N+)

and with a squeezed-vacuum resource

    u S(s)|0> + Y2 (u + v Z) S(s) a^dag|0>,      Y2 = -t sinh(s) / (2 r alpha)

where Z = <x|0> / <x|2 alpha> = exp(4 alpha^2 - 2 sqrt(2) alpha x) is set by
the homodyne outcome x. The Hadamard map is reached for t << r and Z|Y| = 1.
"""

from __future__ import annotations

import logging
from typing import Literal, Optional

import numpy as np

from catgate.analysis.figures import best_hadamard_alpha, fidelity
from catgate.base import GateModel
from catgate.errors import InfeasibleError
from catgate.fock.core import FockKet, apply_operator
from catgate.gates.params import GateParams, GateResult
from catgate.optics.ops import phase_rotation
from catgate.states.constructors import (
    CsqSpec,
    cat,
    cat_norm,
    hadamard_image,
    squeezed_single_photon,
    squeezed_vacuum,
)

logger = logging.getLogger(__name__)


def _check_split(t: float, r: float):
    if not (0.0 <= t <= 1.0 and 0.0 < r <= 1.0):
        raise ValueError(f"Need t in [0, 1] and r in (0, 1], got t={t}, r={r}")


def y1_factor(t: float, r: float, alpha: float) -> float:
    """Y1 = (t / 2r) sqrt(N- / N+)"""
    _check_split(t, r)
    return float(t / (2.0 * r) * np.sqrt(cat_norm(alpha, -1) / cat_norm(alpha, +1)))


def y2_factor(t: float, r: float, s: float, alpha: float) -> float:
    """Y2 = -t sinh(s) / (2 r alpha)"""
    _check_split(t, r)
    if alpha == 0:
        raise ValueError("Y2 is undefined at alpha = 0")
    return float(-t * np.sinh(s) / (2.0 * r * alpha))


def z_factor(x: float, alpha: float) -> float:
    """Z = <x|0> / <x|2 alpha> for real alpha"""
    log_z = 4.0 * alpha ** 2 - 2.0 * np.sqrt(2.0) * alpha * x
    with np.errstate(over="ignore"):
        z = float(np.exp(log_z))
    if not np.isfinite(z) or z == 0.0:
        raise InfeasibleError(f"<x|2 alpha> underflows at x={x}, alpha={alpha}")
    return z


def heralding_x(y: float, alpha: float) -> float:
    """Quadrature outcome with |Z(x) y| = 1"""
    y = abs(float(y))
    if y == 0.0:
        raise InfeasibleError("No heralding point for Y = 0")
    if y > 1.0:
        raise InfeasibleError(f"|Y| = {y:.4g} > 1 needs Z < 1, outside the Z >> 1 regime")
    return float((4.0 * alpha ** 2 - np.log(1.0 / y)) / (2.0 * np.sqrt(2.0) * alpha))


def optimal_heralding_x(t: float, r: float, s: float, alpha: float) -> float:
    """x solving |Z(x) Y2| = 1 for the squeezed resource"""
    return heralding_x(y2_factor(t, r, s, alpha), alpha)


def ideal_output(spec: CsqSpec, t: float, r: float, x: float, D: int) -> FockKet:
    """Normalized u cat+ + Y1 (u + v Z) cat-"""
    y1 = y1_factor(t, r, spec.alpha)
    z = z_factor(x, spec.alpha)
    odd_weight = y1 * (spec.u + spec.v * z)
    return (spec.u * cat(spec.alpha, +1, D) + odd_weight * cat(spec.alpha, -1, D)).normalize()


def squeezed_resource_output(spec: CsqSpec, t: float, r: float, s: float, x: float, D: int) -> FockKet:
    """Normalized u S(s)|0> + Y2 (u + v Z) S(s) a^dag|0>"""
    y2 = y2_factor(t, r, s, spec.alpha)
    z = z_factor(x, spec.alpha)
    odd_weight = y2 * (spec.u + spec.v * z)
    out = spec.u * squeezed_vacuum(s, D) + odd_weight * squeezed_single_photon(s, D)
    if out.norm2 == 0.0:
        raise InfeasibleError(f"Output vanishes for {spec} at s={s}, x={x}")
    return out.normalize()


def limit_output(
    spec: CsqSpec,
    D: int,
    resource: Literal["cat", "squeezed"] = "squeezed",
    s: float = 0.0,
) -> FockKet:
    """
    Corrected output in the t << r limit at Z|Y| = 1: u R+ + v R-, with
    R+/- the even/odd resource components (cats, or S|0> and S a^dag|0>).
    """
    if resource == "cat":
        even, odd = cat(spec.alpha, +1, D), cat(spec.alpha, -1, D)
    elif resource == "squeezed":
        even, odd = squeezed_vacuum(s, D), squeezed_single_photon(s, D)
    else:
        raise ValueError(f"Unknown resource {resource!r}")
    return (spec.u * even + spec.v * odd).normalize()


def _result(ket: FockKet, spec: CsqSpec, phase: float, name: str) -> GateResult:
    if phase:
        ket = apply_operator(phase_rotation(phase, ket.cutoff), ket)
    rho = ket.to_density()
    target = hadamard_image(spec, ket.cutoff)
    fitted_alpha, fitted_f = best_hadamard_alpha(rho, spec)
    return GateResult(rho, None, fidelity(rho, target), spec, fitted_alpha, fitted_f, model=name)


class IdealResourceGate(GateModel):
    """Operator-level gate with the ideal even-cat resource"""

    def __init__(self, params: Optional[GateParams] = None, t: Optional[float] = None, x: Optional[float] = None):
        super().__init__("ideal-resource", params)
        self.t = t
        self.x = x

    def initialize(self):
        p = self.params
        t = p.t_bs if self.t is None else float(self.t)
        self._t, self._r = t, float(np.sqrt(1.0 - t * t))
        if self.x is None:
            self._x = heralding_x(y1_factor(self._t, self._r, p.alpha), p.alpha)
        else:
            self._x = float(self.x)
        self._D = p.cutoffs[-1]
        logger.info("ideal-resource gate: t=%.4g, x=%.4g", self._t, self._x)
        self._initialized = True

    def run(self, spec: CsqSpec) -> GateResult:
        if not self._initialized:
            self.initialize()
        ket = ideal_output(spec, self._t, self._r, self._x, self._D)
        return _result(ket, spec, 0.0, self.model_name)


class SqueezedResourceGate(GateModel):
    """
    Operator-level gate with a pure squeezed-vacuum resource.

    Y2 < 0, so the raw output carries a minus sign on the odd part; the
    parameter ``output_phase`` (pi by default) is applied before the
    fidelity is taken.
    """

    def __init__(
        self,
        params: Optional[GateParams] = None,
        t: Optional[float] = None,
        s: Optional[float] = None,
        x: Optional[float] = None,
    ):
        super().__init__("squeezed-resource", params)
        self.t = t
        self.s = s
        self.x = x

    def initialize(self):
        p = self.params
        t = p.t_bs if self.t is None else float(self.t)
        self._t, self._r = t, float(np.sqrt(1.0 - t * t))
        self._s = p.resource.s if self.s is None else float(self.s)
        if self.x is None:
            self._x = optimal_heralding_x(self._t, self._r, self._s, p.alpha)
        else:
            self._x = float(self.x)
        self._D = p.cutoffs[-1]
        logger.info("squeezed-resource gate: t=%.4g, s=%.4g, x=%.4g", self._t, self._s, self._x)
        self._initialized = True

    def run(self, spec: CsqSpec) -> GateResult:
        if not self._initialized:
            self.initialize()
        ket = squeezed_resource_output(spec, self._t, self._r, self._s, self._x, self._D)
        return _result(ket, spec, self.params.output_phase, self.model_name)
