"""
Measurement models: pure-loss channel, on/off APD with dark counts, and
ideal or windowed inefficient homodyne detection.

Homodyne inefficiency is modelled as a loss channel in front of an ideal
detector, so every homodyne POVM here is L_eta^dag applied to the ideal
projector.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from catgate.errors import QuadratureWarning
from catgate.fock.core import DensityOperator, ModeOperator, OperatorKind, conjugate_by

logger = logging.getLogger(__name__)

# Dark-count probability per heralding slot: 20 counts/s at 815 kHz
DEFAULT_P_DARK = 20.0 / 815e3

# Gauss-Legendre panels never span more than this much quadrature
MAX_PANEL_WIDTH = 0.5

POVM_TOL = 1e-10


@dataclass(frozen=True)
class DetectorSpec:
    """Detector efficiencies, dark counts and the homodyne heralding window"""

    eta_apd: float = 0.25
    p_dark: float = DEFAULT_P_DARK
    eta_hd: float = 0.77
    x0: float = 0.4
    delta: float = 0.02

    def __post_init__(self):
        for name in ("eta_apd", "p_dark", "eta_hd"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if not self.delta > 0:
            raise ValueError(f"Window width must be positive, got {self.delta}")

    @property
    def window(self) -> tuple:
        return (self.x0, self.delta)

    def with_window(self, x0: float, delta: Optional[float] = None) -> "DetectorSpec":
        return DetectorSpec(self.eta_apd, self.p_dark, self.eta_hd, float(x0), self.delta if delta is None else float(delta))


@dataclass(frozen=True)
class PovmElement:
    """Positive operator on one mode for a single measurement outcome"""

    matrix: np.ndarray
    label: str = ""
    converged: bool = True

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128, copy=True)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def operator(self, mode: Optional[int] = None) -> ModeOperator:
        op = ModeOperator(self.matrix, OperatorKind.POVM, (self.dim,))
        return op if mode is None else op.on(mode)

    def complement(self, label: str = "") -> "PovmElement":
        return PovmElement(np.eye(self.dim) - self.matrix, label or f"not {self.label}", self.converged)

    def eigenvalue_bounds(self) -> tuple:
        ev = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))
        return float(ev.min()), float(ev.max())

    def is_valid(self, tol: float = POVM_TOL) -> bool:
        lo, hi = self.eigenvalue_bounds()
        herm = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        return herm <= tol and lo >= -tol and hi <= 1.0 + tol

    def probability(self, rho: DensityOperator) -> float:
        return float(np.real(np.einsum("ij,ji->", rho.matrix, self.matrix)))


def loss_kraus(eta: float, D: int) -> np.ndarray:
    """Kraus operators E_k[n-k, n] = sqrt(C(n,k) eta^(n-k) (1-eta)^k), shape (D, D, D)"""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"Efficiency must lie in [0, 1], got {eta}")
    kraus = np.zeros((D, D, D))
    n = np.arange(D)
    for k in range(D):
        cols = n[n >= k]
        log_binom = gammaln(cols + 1) - gammaln(k + 1) - gammaln(cols - k + 1)
        with np.errstate(divide="ignore"):
            weight = np.exp(log_binom) * np.power(eta, cols - k) * np.power(1.0 - eta, k)
        kraus[k, cols - k, cols] = np.sqrt(weight)
    return kraus


def loss_channel(rho: DensityOperator, eta: float, mode: int = 0) -> DensityOperator:
    """Pure loss on one mode: beam splitter of transmittance eta with vacuum, ancilla traced"""
    if not 0 <= mode < rho.num_modes:
        raise ValueError(f"Mode {mode} out of range for {rho.num_modes} modes")
    D = rho.mode_dims[mode]
    if eta == 1.0:
        return rho
    out = np.zeros_like(rho.matrix)
    for E in loss_kraus(eta, D):
        if not E.any():
            continue
        out = out + conjugate_by(ModeOperator(E, OperatorKind.GENERIC, (D,), (mode,)), rho)
    return DensityOperator(out, rho.mode_dims, rho.trace_deficit)


def loss_adjoint(povm: np.ndarray, eta: float) -> np.ndarray:
    """Heisenberg-picture loss: sum_k E_k^dag Pi E_k"""
    if eta == 1.0:
        return np.array(povm, dtype=np.complex128)
    kraus = loss_kraus(eta, povm.shape[0])
    return np.einsum("kji,jl,klm->im", kraus, povm, kraus)


def apd_click_povm(spec: DetectorSpec, D: int) -> PovmElement:
    """On/off click: I - (1 - p_dark)(1 - eta)^n, diagonal in the Fock basis"""
    n = np.arange(D)
    no_click = (1.0 - spec.p_dark) * np.power(1.0 - spec.eta_apd, n)
    return PovmElement(np.diag(1.0 - no_click), "apd click")


def apd_no_click_povm(spec: DetectorSpec, D: int) -> PovmElement:
    return apd_click_povm(spec, D).complement("apd no click")


def quadrature_wavefunctions(D: int, x) -> np.ndarray:
    """
    <x|n> for n = 0..D-1 on the points ``x``, shape (D, len(x)).

    psi_n(x) = pi^(-1/4) (2^n n!)^(-1/2) H_n(x) exp(-x^2/2), evaluated with the
    normalized three-term recurrence.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.zeros((D, x.size))
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if D > 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, D - 1):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def quadrature_wavefunction(n: int, x: float) -> float:
    return float(quadrature_wavefunctions(n + 1, [x])[n, 0])


def _window_projector(x0: float, delta: float, D: int, nodes: int) -> np.ndarray:
    lo, hi = x0 - 0.5 * delta, x0 + 0.5 * delta
    panels = max(int(np.ceil(delta / MAX_PANEL_WIDTH)), 1)
    edges = np.linspace(lo, hi, panels + 1)
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * gx[None, :]).reshape(-1)
    ws = (half[:, None] * gw[None, :]).reshape(-1)
    psi = quadrature_wavefunctions(D, xs)
    return (psi * ws) @ psi.T


def homodyne_window_povm(spec: DetectorSpec, D: int, nodes: int = 8, tol: float = 1e-10) -> PovmElement:
    """
    Pi = L_eta^dag( integral over [x0 - delta/2, x0 + delta/2] of |x><x| dx ).

    The integral uses ``nodes``-point Gauss-Legendre on panels no wider than
    MAX_PANEL_WIDTH and is checked against twice the order; a mismatch above
    ``tol`` yields QuadratureWarning and an element flagged not converged.
    """
    if not np.isfinite(spec.delta):
        return PovmElement(np.eye(D), "homodyne full line")
    ideal = _window_projector(spec.x0, spec.delta, D, nodes)
    check = _window_projector(spec.x0, spec.delta, D, 2 * nodes)
    err = float(np.max(np.abs(ideal - check)))
    converged = err <= tol * max(float(np.max(np.abs(check))), 1.0)
    if not converged:
        warnings.warn(
            f"homodyne window ({spec.x0}, {spec.delta}) not converged at {nodes} nodes (err {err:.2e})",
            QuadratureWarning,
            stacklevel=2,
        )
    return PovmElement(loss_adjoint(ideal, spec.eta_hd), f"homodyne x in {spec.window}", converged)


def homodyne_point_povm(x: float, eta: float, D: int) -> PovmElement:
    """Density (per unit x) of an ideal quadrature outcome x behind loss eta"""
    psi = quadrature_wavefunctions(D, [x])[:, 0]
    return PovmElement(loss_adjoint(np.outer(psi, psi), eta), f"homodyne x = {x}")
