"""
Four-mode conditioned simulation of the gate.

Modes: 0 displaced input, 1 input tap, 2 APD mode, 3 resource (output).
The input state is D(alpha)|psi_in> x |0> x |0> x rho_A and the circuit is
U = U_BS(1,2) U_ABS1(0,1) U_ABS2(2,3). Success is an APD click on mode 2
jointly with a homodyne outcome of mode 0 inside the window; the output is
the conditioned state of mode 3.

rho_A is eigendecomposed once, so every run propagates a handful of pure
four-mode kets instead of a dense four-mode density matrix.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from catgate.analysis.figures import best_hadamard_alpha, fidelity
from catgate.base import GateModel
from catgate.detectors.measurements import apd_click_povm, homodyne_window_povm
from catgate.errors import DegenerateConditioningError, InfeasibleError, TruncationWarning
from catgate.fock.core import (
    DEFAULT_MAX_DIM,
    DensityOperator,
    FockKet,
    ModeOperator,
    OperatorKind,
    apply_operator,
    apply_unitary,
    basis_ket,
    expect,
    mode_populations,
    population_leakage,
    tensor_all,
)
from catgate.gates.params import MODE_APD, MODE_INPUT, GateParams, GateResult
from catgate.optics.ops import beam_splitter, phase_rotation
from catgate.states.constructors import CsqSpec, cat, displaced_csq, hadamard_image, squeezed_thermal

logger = logging.getLogger(__name__)

# Resource eigenvalues below this are dropped
EIGEN_CUTOFF = 1e-14

# Smallest heralding probability that still defines a conditioned state
MIN_SUCCESS_PROBABILITY = 1e-300

BALANCE_TOL = 0.05
BALANCE_RANGE = (0.0, 3.0)
BALANCE_STEP = 0.05


def resource_state(params: GateParams) -> DensityOperator:
    """rho_A on the output-mode cutoff"""
    D = params.cutoffs[-1]
    res = params.resource
    if res.kind == "cat":
        return cat(params.alpha, +1, D, params.leakage_tol).to_density()
    return squeezed_thermal(res, D, params.leakage_tol)


class RealisticGate(GateModel):
    """Full four-mode gate with lossy detectors and an impure resource"""

    def __init__(self, params: Optional[GateParams] = None, nodes: int = 8):
        super().__init__("realistic", params)
        self.nodes = nodes
        self._warned = False

    def initialize(self):
        p = self.params
        dims = p.cutoffs
        try:
            # applied right to left: ABS2, then ABS1, then BS
            self._unitaries = [beam_splitter(spec, dims) for spec in (p.abs2(), p.abs1(), p.bs())]
            self._pi_hd = homodyne_window_povm(p.detectors, dims[MODE_INPUT], self.nodes).matrix
            self._pi_apd = apd_click_povm(p.detectors, dims[MODE_APD]).matrix
            rho_a = resource_state(p)
        except ValueError as e:
            raise RuntimeError(f"Failed to set up realistic gate: {e}") from e
        weights, vectors = np.linalg.eigh(0.5 * (rho_a.matrix + rho_a.matrix.conj().T))
        keep = weights > EIGEN_CUTOFF
        self._resource = [(float(w), vectors[:, k]) for k, w in zip(np.flatnonzero(keep), weights[keep])]
        self._resource_deficit = rho_a.trace_deficit
        self._ancillas = np.kron(basis_ket(0, dims[1]).amplitudes, basis_ket(0, dims[2]).amplitudes)
        self._rotation = phase_rotation(p.output_phase, dims[-1]).matrix
        logger.info(
            "realistic gate: cutoffs %s, %d resource components, window %s",
            dims, len(self._resource), p.detectors.window,
        )
        self._initialized = True

    def _propagate(self, ket: FockKet) -> Tuple[List[Tuple[float, np.ndarray]], float, float]:
        """Push |ket> x |0> x |0> x |e_k> through U for every resource eigenvector"""
        if not self._initialized:
            self.initialize()
        dims = self.params.cutoffs
        front = np.kron(ket.amplitudes, self._ancillas)
        out, lost = [], 0.0
        pops = [np.zeros(d) for d in dims]
        for w, vec in self._resource:
            state = FockKet(np.kron(front, vec), dims)
            for U in self._unitaries:
                state = apply_operator(U, state)
            lost += w * max(1.0 - state.norm2, 0.0)
            # leakage of the mixture, not of its worst component
            for acc, p in zip(pops, mode_populations(state)):
                acc += w * p
            out.append((w, state.as_tensor()))
        return out, lost, population_leakage(pops)

    def heralded_operator(self, ket_a: FockKet, ket_b: Optional[FockKet] = None) -> Tuple[np.ndarray, float, float]:
        """
        Unnormalized output Tr_012[Pi U (|a><b| x rho_A) U^dag] on mode 3,
        before the output phase. Returns (matrix, trace lost, leakage).
        """
        prop_a, lost, leak = self._propagate(ket_a)
        prop_b = prop_a if ket_b is None else self._propagate(ket_b)[0]
        D = self.params.cutoffs[-1]
        M = np.zeros((D, D), dtype=np.complex128)
        for (w, psi_a), (_, psi_b) in zip(prop_a, prop_b):
            phi = np.einsum("xa,abcm->xbcm", self._pi_hd, psi_a)
            phi = np.einsum("yc,xbcm->xbym", self._pi_apd, phi)
            M += w * np.einsum("xbym,xbyn->mn", phi, psi_b.conj())
        return M, lost, leak

    def herald_marginal(self, ket: FockKet) -> np.ndarray:
        """
        Operator K on mode 0 with P_S = tr(K Pi_HD) for any homodyne POVM,
        i.e. the click-conditioned reduced state of the input mode.
        """
        prop, _, _ = self._propagate(ket)
        D = self.params.cutoffs[0]
        K = np.zeros((D, D), dtype=np.complex128)
        for w, psi in prop:
            phi = np.einsum("yc,abcm->abym", self._pi_apd, psi)
            K += w * np.einsum("abym,xbym->ax", phi, psi.conj())
        return K

    @property
    def output_rotation(self) -> np.ndarray:
        if not self._initialized:
            self.initialize()
        return self._rotation

    def input_ket(self, spec: CsqSpec) -> FockKet:
        if abs(spec.alpha - self.params.alpha) > 1e-12:
            raise ValueError(f"Input amplitude {spec.alpha} differs from the gate amplitude {self.params.alpha}")
        return displaced_csq(spec, self.params.cutoffs[0], self.params.leakage_tol)

    def run(self, spec: CsqSpec) -> GateResult:
        if not self._initialized:
            self.initialize()
        M, lost, leak = self.heralded_operator(self.input_ket(spec))
        p_success = float(np.trace(M).real)
        if not np.isfinite(p_success) or p_success < MIN_SUCCESS_PROBABILITY:
            raise DegenerateConditioningError(
                f"Heralding probability {p_success:.3g} for theta={spec.theta:.4g}, phi={spec.phi:.4g}"
            )
        M = self._rotation @ M @ self._rotation.conj().T
        rho = DensityOperator(M / p_success, (self.params.cutoffs[-1],), self._resource_deficit + lost)
        flagged = leak >= self.params.leakage_tol
        if flagged and not self._warned:
            warnings.warn(
                f"{self.model_name}: population in the top Fock levels exceeds {self.params.leakage_tol:g}",
                TruncationWarning,
                stacklevel=2,
            )
            self._warned = True
        target = hadamard_image(spec, rho.dim)
        fitted_alpha, fitted_f = best_hadamard_alpha(rho, spec)
        return GateResult(
            rho_out=rho,
            p_success=min(p_success, 1.0),
            fidelity_vs_ideal=fidelity(rho, target),
            spec=spec,
            target_alpha_opt=fitted_alpha,
            fidelity_fitted=fitted_f,
            truncation_warning=flagged,
            model=self.model_name,
        )


def simulate_gate(params: GateParams, spec: CsqSpec) -> GateResult:
    """One conditioned run of the realistic gate"""
    with RealisticGate(params) as gate:
        return gate.run(spec)


def gate_map(model: RealisticGate, ket_a: FockKet, ket_b: FockKet) -> np.ndarray:
    """
    Heralded action on the operator |a><b| of the (already displaced) input
    mode, output phase included; linear in |a> and antilinear in |b>.
    """
    M, _, _ = model.heralded_operator(ket_a, ket_b)
    R = model.output_rotation
    return R @ M @ R.conj().T


def success_probability_dense(params: GateParams, spec: CsqSpec, max_dim: int = DEFAULT_MAX_DIM) -> float:
    """
    P_S = tr(U rho_in U^dag Pi) on the dense four-mode density matrix.

    Independent of the ket propagation in RealisticGate and only feasible
    for small cutoffs.
    """
    dims = params.cutoffs
    rho_in = tensor_all(
        [
            displaced_csq(spec, dims[0], params.leakage_tol).to_density(),
            basis_ket(0, dims[1]).to_density(),
            basis_ket(0, dims[2]).to_density(),
            resource_state(params),
        ],
        max_dim=max_dim,
    )
    for bs in (params.abs2(), params.abs1(), params.bs()):
        rho_in = apply_unitary(beam_splitter(bs, dims), rho_in)
    pi_hd = homodyne_window_povm(params.detectors, dims[0]).matrix
    pi_apd = apd_click_povm(params.detectors, dims[2]).matrix
    herald = ModeOperator(np.kron(pi_hd, pi_apd), OperatorKind.POVM, (dims[0], dims[2]), (MODE_INPUT, MODE_APD))
    return float(np.real(expect(rho_in, herald)))


@dataclass(frozen=True)
class BalancedWindow:
    """Heralding window equalizing the two basis success probabilities"""

    x0: float
    delta: float
    p_first: float
    p_second: float

    @property
    def window(self) -> tuple:
        return (self.x0, self.delta)

    @property
    def ratio(self) -> float:
        return self.p_first / self.p_second


def balance_window(
    params: GateParams,
    targets: Optional[Sequence[CsqSpec]] = None,
    delta: Optional[float] = None,
    x_range: Tuple[float, float] = BALANCE_RANGE,
    rel_tol: float = BALANCE_TOL,
    step: float = BALANCE_STEP,
) -> BalancedWindow:
    """
    Window centre x0 (width fixed) where P_S of the two targets agree.

    Defaults to the basis inputs |alpha> and |-alpha>. Scans ``x_range``
    upwards and returns the first point within ``rel_tol`` or the Brent
    root of log(P1/P2) inside the first bracketing step.
    """
    alpha = params.alpha
    if targets is None:
        targets = (CsqSpec(alpha, 0.0), CsqSpec(alpha, np.pi / 2))
    first, second = targets
    width = params.detectors.delta if delta is None else float(delta)
    gate = RealisticGate(params)
    gate.initialize()
    K1 = gate.herald_marginal(gate.input_ket(first))
    K2 = gate.herald_marginal(gate.input_ket(second))
    D = params.cutoffs[0]

    def probabilities(x: float) -> Tuple[float, float]:
        pi = homodyne_window_povm(params.detectors.with_window(x, width), D, gate.nodes).matrix
        return float(np.real(np.einsum("ij,ji->", K1, pi))), float(np.real(np.einsum("ij,ji->", K2, pi)))

    def log_ratio(x: float) -> float:
        p1, p2 = probabilities(x)
        if p1 <= 0.0 or p2 <= 0.0:
            raise DegenerateConditioningError(f"Zero heralding probability at x={x}")
        return float(np.log(p1 / p2))

    grid = np.arange(x_range[0], x_range[1] + 0.5 * step, step)
    prev = None
    for x in grid:
        g = log_ratio(x)
        if abs(np.expm1(g)) <= rel_tol:
            x0 = float(x)
            break
        if prev is not None and np.sign(g) != np.sign(prev[1]):
            x0 = float(brentq(log_ratio, prev[0], x, xtol=1e-6))
            break
        prev = (x, g)
    else:
        raise InfeasibleError(f"P_S ratio never crosses 1 for x in {tuple(x_range)}")
    p1, p2 = probabilities(x0)
    logger.info("balanced window x0=%.4f delta=%.4g, P_S %.3g / %.3g", x0, width, p1, p2)
    return BalancedWindow(x0, width, p1, p2)
