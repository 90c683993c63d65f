"""
Parameter sweeps over the gate: fidelity against CSQ amplitude, fidelity
and success probability over the input Bloch sphere, and the process
fidelity on an entangled input.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from tqdm import tqdm

from catgate.analysis.figures import fidelity
from catgate.base import GateModel
from catgate.errors import DegenerateConditioningError, InfeasibleError
from catgate.fock.core import DensityOperator, FockKet
from catgate.gates.analytic import (
    heralding_x,
    ideal_output,
    limit_output,
    squeezed_resource_output,
    y1_factor,
    y2_factor,
)
from catgate.gates.params import GateParams
from catgate.gates.realistic import RealisticGate, gate_map
from catgate.optics.ops import phase_rotation
from catgate.states.constructors import CsqSpec, cat, coherent, hadamard_image, s_to_db

logger = logging.getLogger(__name__)

Metric = Literal["basis_average", "worst", "bloch"]

# Fock cutoff for the closed-form curves (covers alpha <= 2 and s <= 1.2)
CURVE_CUTOFF = 100
SQUEEZING_BOUNDS = (0.0, 1.2)

# Nodes of the sphere average used by the "bloch" metric
BLOCH_THETA_NODES = 8
BLOCH_PHI_NODES = 8


def _analytic_output(spec: CsqSpec, resource: str, s: float, t: float, D: int) -> FockKet:
    """Corrected closed-form output at the Z|Y| = 1 heralding point"""
    if t == 0.0:
        return limit_output(spec, D, resource, s)
    r = float(np.sqrt(1.0 - t * t))
    if resource == "cat":
        x = heralding_x(y1_factor(t, r, spec.alpha), spec.alpha)
        return ideal_output(spec, t, r, x, D)
    x = heralding_x(y2_factor(t, r, s, spec.alpha), spec.alpha)
    ket = squeezed_resource_output(spec, t, r, s, x, D)
    return FockKet(phase_rotation(np.pi, D).matrix @ ket.amplitudes, ket.mode_dims)


def _bloch_nodes() -> List[Tuple[float, float, float]]:
    """(theta, phi, weight) for the uniform average over the Bloch sphere"""
    # Bloch polar angle is 2 theta, so cos(2 theta) is uniform on [-1, 1]
    c, w = np.polynomial.legendre.leggauss(BLOCH_THETA_NODES)
    thetas = 0.5 * np.arccos(c)
    phis = 2 * np.pi * np.arange(BLOCH_PHI_NODES) / BLOCH_PHI_NODES
    return [(th, ph, wt / (2.0 * BLOCH_PHI_NODES)) for th, wt in zip(thetas, w) for ph in phis]


def gate_fidelity(
    alpha: float,
    resource: Literal["cat", "squeezed"] = "squeezed",
    s: float = 0.0,
    t: float = 0.0,
    metric: Metric = "basis_average",
    D: int = CURVE_CUTOFF,
) -> float:
    """
    Closed-form gate fidelity at amplitude alpha.

    ``t = 0`` is the t << r limit. ``basis_average`` averages the basis
    inputs |alpha>, |-alpha>; ``worst`` takes the smaller of the two;
    ``bloch`` averages over the whole input sphere.
    """

    def score(theta: float, phi: float = 0.0) -> float:
        spec = CsqSpec(alpha, theta, phi)
        return fidelity(_analytic_output(spec, resource, s, t, D), hadamard_image(spec, D))

    if metric == "bloch":
        return float(sum(w * score(th, ph) for th, ph, w in _bloch_nodes()))
    poles = (score(0.0), score(np.pi / 2))
    if metric == "worst":
        return float(min(poles))
    if metric == "basis_average":
        return float(np.mean(poles))
    raise ValueError(f"Unknown fidelity metric {metric!r}")


def optimal_squeezing(
    alpha: float,
    t: float = 0.0,
    metric: Metric = "basis_average",
    bounds: Tuple[float, float] = SQUEEZING_BOUNDS,
    D: int = CURVE_CUTOFF,
) -> Tuple[float, float]:
    """Squeezing s maximizing the squeezed-resource gate fidelity; returns (s, F)"""

    def infidelity(s: float) -> float:
        try:
            return 1.0 - gate_fidelity(alpha, "squeezed", s, t, metric, D)
        except InfeasibleError:
            return 1.0

    res = minimize_scalar(infidelity, bounds=bounds, method="bounded", options={"xatol": 1e-5})
    return float(res.x), 1.0 - float(res.fun)


@dataclass(frozen=True)
class CurveRow:
    alpha: float
    f_ideal: float
    f_squeezed: float
    s_opt: float

    @property
    def s_opt_db(self) -> float:
        return s_to_db(self.s_opt)


def fidelity_curve(
    alphas: Iterable[float],
    t: float = 0.0,
    metric: Metric = "basis_average",
    D: int = CURVE_CUTOFF,
    progress: bool = False,
) -> List[CurveRow]:
    """Ideal-resource fidelity and squeezing-optimized squeezed-resource fidelity per alpha"""
    rows = []
    for alpha in tqdm(list(alphas), desc="fidelity curve", disable=not progress):
        alpha = float(alpha)
        if not 0.0 < alpha <= 2.0:
            raise ValueError(f"Curve amplitudes must lie in (0, 2], got {alpha}")
        f_ideal = gate_fidelity(alpha, "cat", 0.0, t, metric, D)
        s_opt, f_sq = optimal_squeezing(alpha, t, metric, D=D)
        rows.append(CurveRow(alpha, f_ideal, f_sq, s_opt))
    return rows


def basis_fidelities(model: GateModel, alpha: Optional[float] = None) -> Tuple[float, float]:
    """Gate fidelity for the inputs |alpha> and |-alpha>"""
    a = model.params.alpha if alpha is None else alpha
    plus = model.run(CsqSpec(a, 0.0))
    minus = model.run(CsqSpec(a, np.pi / 2))
    return plus.fidelity_vs_ideal, minus.fidelity_vs_ideal


@dataclass(frozen=True)
class BlochGrid:
    """
    Per-cell fidelity and success probability over input (theta, phi).

    ``fidelity`` scores each output against the Hadamard image at the gate
    amplitude; ``fidelity_fitted`` against the image at the per-cell best
    amplitude ``target_alpha``.
    """

    thetas: np.ndarray
    phis: np.ndarray
    fidelity: np.ndarray
    p_success: np.ndarray
    failed: np.ndarray
    fidelity_fitted: Optional[np.ndarray] = None
    target_alpha: Optional[np.ndarray] = None

    @property
    def mean_fidelity(self) -> float:
        return float(np.nanmean(self.fidelity))

    @property
    def mean_success(self) -> float:
        return float(np.nanmean(self.p_success))

    @property
    def fidelity_span(self) -> Tuple[float, float]:
        return float(np.nanmin(self.fidelity)), float(np.nanmax(self.fidelity))

    @property
    def mean_fitted_fidelity(self) -> float:
        return float(np.nanmean(self._fitted()))

    @property
    def fitted_fidelity_span(self) -> Tuple[float, float]:
        fitted = self._fitted()
        return float(np.nanmin(fitted)), float(np.nanmax(fitted))

    def _fitted(self) -> np.ndarray:
        return self.fidelity if self.fidelity_fitted is None else self.fidelity_fitted

    def rows(self) -> Iterator[Tuple[float, float, float, float, float, float]]:
        """(theta, phi, F, F_fitted, target alpha, P_S) per cell"""
        fitted = self._fitted()
        alphas = np.full_like(self.fidelity, np.nan) if self.target_alpha is None else self.target_alpha
        for i, th in enumerate(self.thetas):
            for j, ph in enumerate(self.phis):
                yield (
                    float(th),
                    float(ph),
                    float(self.fidelity[i, j]),
                    float(fitted[i, j]),
                    float(alphas[i, j]),
                    float(self.p_success[i, j]),
                )


def bloch_axes(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """theta in [0, pi/2] inclusive, phi in [0, 2 pi) exclusive"""
    if n_theta < 1 or n_phi < 1:
        raise ValueError("Bloch grid needs at least one sample per axis")
    thetas = np.linspace(0.0, np.pi / 2, n_theta) if n_theta > 1 else np.array([0.0])
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    return thetas, phis


def bloch_sweep(
    params: GateParams,
    thetas: Sequence[float],
    phis: Sequence[float],
    model: Optional[GateModel] = None,
    threads: int = 1,
    progress: bool = False,
) -> BlochGrid:
    """
    Run the gate on every (theta, phi) cell. Cells whose heralding
    probability vanishes are recorded as NaN and flagged in ``failed``.
    """
    thetas, phis = np.asarray(thetas, float), np.asarray(phis, float)
    if thetas.size == 0 or phis.size == 0:
        raise ValueError("Bloch grid is empty")
    gate = model if model is not None else RealisticGate(params)
    if not gate.is_initialized():
        gate.initialize()
    cells = [(i, j) for i in range(thetas.size) for j in range(phis.size)]
    missing = (np.nan, np.nan, np.nan, np.nan)

    def run_cell(cell):
        i, j = cell
        try:
            res = gate.run(CsqSpec(gate.params.alpha, thetas[i], phis[j]))
        except DegenerateConditioningError as e:
            logger.warning("cell theta=%.4g phi=%.4g skipped: %s", thetas[i], phis[j], e)
            return cell, missing
        p = np.nan if res.p_success is None else res.p_success
        fitted = res.fidelity_vs_ideal if res.fidelity_fitted is None else res.fidelity_fitted
        alpha = res.spec.alpha if res.target_alpha_opt is None else res.target_alpha_opt
        return cell, (res.fidelity_vs_ideal, fitted, alpha, p)

    fid = np.full((thetas.size, phis.size), np.nan)
    fitted, alphas, prob = np.full_like(fid, np.nan), np.full_like(fid, np.nan), np.full_like(fid, np.nan)
    with ThreadPoolExecutor(max_workers=max(int(threads), 1)) as pool:
        results = pool.map(run_cell, cells)
        for (i, j), values in tqdm(results, total=len(cells), desc="bloch sweep", disable=not progress):
            fid[i, j], fitted[i, j], alphas[i, j], prob[i, j] = values
    return BlochGrid(thetas, phis, fid, prob, np.isnan(fid), fitted, alphas)


def entangled_output(params: GateParams, model: Optional[RealisticGate] = None) -> Tuple[DensityOperator, float]:
    """
    Gate applied to mode B of (|alpha, alpha> + |-alpha, -alpha>)/sqrt(N).
    Returns the conditioned two-mode state and its heralding probability.
    """
    gate = model if model is not None else RealisticGate(params)
    alpha = params.alpha
    D_ref, D_out = params.cutoffs[-1], params.cutoffs[-1]
    refs = [coherent(alpha, D_ref), coherent(-alpha, D_ref)]
    inputs = [gate.input_ket(CsqSpec(alpha, 0.0)), gate.input_ket(CsqSpec(alpha, np.pi / 2))]
    weight = 1.0 / (2.0 + 2.0 * np.exp(-4.0 * alpha ** 2))
    rho = np.zeros((D_ref * D_out, D_ref * D_out), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            block = gate_map(gate, inputs[i], inputs[j])
            rho += weight * np.kron(np.outer(refs[i].amplitudes, refs[j].amplitudes.conj()), block)
    p_success = float(np.trace(rho).real)
    if p_success <= 0.0:
        raise DegenerateConditioningError(f"Entangled input heralds with probability {p_success:.3g}")
    return DensityOperator(rho / p_success, (D_ref, D_out)), p_success


def entangled_target(alpha: float, D_ref: int, D_out: int) -> FockKet:
    """(|alpha> cat+ + |-alpha> cat-)/sqrt(N), the ideally transformed entangled state"""
    target = np.kron(coherent(alpha, D_ref).amplitudes, cat(alpha, +1, D_out).amplitudes) + np.kron(
        coherent(-alpha, D_ref).amplitudes, cat(alpha, -1, D_out).amplitudes
    )
    return FockKet(target, (D_ref, D_out)).normalize()


def process_fidelity_and_rate(params: GateParams, model: Optional[RealisticGate] = None) -> Tuple[float, float]:
    """(process fidelity, heralding probability) of the gated entangled state"""
    rho, p_success = entangled_output(params, model)
    target = entangled_target(params.alpha, *rho.mode_dims).amplitudes
    value = float(np.real(np.vdot(target, rho.matrix @ target)))
    return min(max(value, 0.0), 1.0), p_success


def process_fidelity(params: GateParams, model: Optional[RealisticGate] = None) -> float:
    """Fidelity of the gated entangled state with its ideal image"""
    return process_fidelity_and_rate(params, model)[0]
