"""
Single-state figures of merit: fidelity, best-matching cat amplitude and
the Wigner function.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import eval_genlaguerre, gammaln

from catgate.errors import DimensionError
from catgate.fock.core import DensityOperator, FockKet
from catgate.states.constructors import CsqSpec, cat, hadamard_image

logger = logging.getLogger(__name__)

# Default phase-space grid
WIGNER_EXTENT = 4.0
WIGNER_POINTS = 161

ALPHA_SCAN_POINTS = 41


def _single_mode(rho: Union[DensityOperator, FockKet]) -> DensityOperator:
    if isinstance(rho, FockKet):
        rho = rho.to_density()
    if rho.num_modes != 1:
        raise DimensionError(f"Expected a single-mode state, got mode_dims {rho.mode_dims}")
    return rho


def fidelity(rho: Union[DensityOperator, FockKet], target: FockKet) -> float:
    """<psi|rho|psi> for a normalized target ket"""
    rho = _single_mode(rho)
    if target.mode_dims != rho.mode_dims:
        raise DimensionError(f"Target dims {target.mode_dims} differ from state dims {rho.mode_dims}")
    psi = target.amplitudes
    value = float(np.real(np.vdot(psi, rho.matrix @ psi)) / target.norm2)
    return min(max(value, 0.0), 1.0)


def _scan_then_refine(infidelity, lo: float, hi: float, xatol: float) -> Tuple[float, float]:
    """Coarse scan to bracket the best amplitude, bounded Brent to refine it"""
    if not 0.0 < lo < hi:
        raise ValueError(f"Invalid alpha range {(lo, hi)}")
    grid = np.linspace(lo, hi, ALPHA_SCAN_POINTS)
    scores = np.array([infidelity(a) for a in grid])
    k = int(np.argmin(scores))
    step = grid[1] - grid[0]
    bounds = (max(lo, grid[k] - step), min(hi, grid[k] + step))
    res = minimize_scalar(infidelity, bounds=bounds, method="bounded", options={"xatol": xatol})
    best_a, best_f = float(res.x), 1.0 - float(res.fun)
    if 1.0 - scores[k] > best_f:
        best_a, best_f = float(grid[k]), 1.0 - float(scores[k])
    return best_a, best_f


def best_target_alpha(
    rho: Union[DensityOperator, FockKet],
    sign: int,
    alpha_range: Tuple[float, float] = (0.3, 1.5),
    xatol: float = 1e-3,
) -> Tuple[float, float]:
    """Cat amplitude whose even (sign=+1) or odd (sign=-1) cat best matches rho"""
    rho = _single_mode(rho)
    D = rho.dim
    lo, hi = (float(a) for a in alpha_range)
    return _scan_then_refine(lambda a: 1.0 - fidelity(rho, cat(a, sign, D, tol=np.inf)), lo, hi, xatol)


def best_hadamard_alpha(
    rho: Union[DensityOperator, FockKet],
    spec: CsqSpec,
    alpha_range: Optional[Tuple[float, float]] = None,
    xatol: float = 1e-3,
) -> Tuple[float, float]:
    """
    Amplitude a maximizing the fidelity of rho with u cat+(a) + v cat-(a),
    keeping the input's u and v. Searches [alpha/2, 3 alpha/2] by default
    and never reports less than the fidelity at the input amplitude.
    """
    rho = _single_mode(rho)
    D = rho.dim
    if alpha_range is None:
        alpha_range = (0.5 * spec.alpha, 1.5 * spec.alpha)
    lo, hi = (float(a) for a in alpha_range)
    best_a, best_f = _scan_then_refine(
        lambda a: 1.0 - fidelity(rho, hadamard_image(spec, D, alpha=a, tol=np.inf)), lo, hi, xatol
    )
    nominal = fidelity(rho, hadamard_image(spec, D, tol=np.inf))
    if nominal >= best_f:
        return float(spec.alpha), nominal
    return best_a, best_f


def wigner_grid(rho: Union[DensityOperator, FockKet], xs, ps) -> np.ndarray:
    """
    W(x, p) on the outer grid xs x ps, shape (len(xs), len(ps)).

    Sum over rho_mn of the Fock-basis Wigner functions
    W_mn = (-1)^n sqrt(2^(m-n) n!/m!) (x - ip)^(m-n) L_n^(m-n)(2r^2) e^(-r^2)/pi
    for m >= n, normalized so the integral over phase space is 1.
    """
    rho = _single_mode(rho)
    X, P = np.meshgrid(np.atleast_1d(np.asarray(xs, float)), np.atleast_1d(np.asarray(ps, float)), indexing="ij")
    r2 = X ** 2 + P ** 2
    base = np.exp(-r2) / np.pi
    z = X - 1j * P
    mat = rho.matrix
    W = np.zeros(X.shape, dtype=np.complex128)
    for n in range(rho.dim):
        for m in range(n, rho.dim):
            if mat[m, n] == 0:
                continue
            k = m - n
            coeff = (-1) ** n * np.exp(0.5 * (k * np.log(2.0) + gammaln(n + 1) - gammaln(m + 1)))
            term = coeff * z ** k * eval_genlaguerre(n, k, 2.0 * r2) * base
            # rho_nm W_nm is the conjugate of rho_mn W_mn
            W += (1.0 if k == 0 else 2.0) * mat[m, n] * term
    return np.real(W)


def wigner(rho: Union[DensityOperator, FockKet], x: float, p: float) -> float:
    return float(wigner_grid(rho, [x], [p])[0, 0])


def wigner_origin(rho: Union[DensityOperator, FockKet]) -> float:
    """W(0, 0) = (1/pi) sum_n (-1)^n rho_nn"""
    rho = _single_mode(rho)
    parity = (-1.0) ** np.arange(rho.dim)
    return float(np.sum(parity * rho.populations()) / np.pi)


def default_wigner_axes() -> Tuple[np.ndarray, np.ndarray]:
    axis = np.linspace(-WIGNER_EXTENT, WIGNER_EXTENT, WIGNER_POINTS)
    return axis, axis.copy()
