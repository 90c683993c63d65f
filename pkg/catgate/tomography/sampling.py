"""
Synthetic homodyne data: phase-scanned quadrature samples drawn by inverse
CDF from a fine tabulation, and the text dataset format

    # catgate-quadrature v1, eta=<float>, seed=<int>
    theta_lo<TAB>x
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from catgate.detectors.measurements import loss_channel, quadrature_wavefunctions
from catgate.errors import CatgateError, DatasetFormatError, DimensionError
from catgate.fock.core import DensityOperator, FockKet
from catgate.io import atomic_write, fmt

logger = logging.getLogger(__name__)

SAMPLING_RANGE = 6.0
SAMPLING_STEP = 0.01

# A seed of -1 in the header marks unseeded data
UNSEEDED = -1

_HEADER_RE = re.compile(r"^#\s*catgate-quadrature v1,\s*eta=([^,\s]+),\s*seed=(-?\d+)\s*$")


@dataclass(frozen=True)
class QuadratureDataset:
    """Records (theta_lo, x) plus acquisition metadata"""

    phases: np.ndarray
    x: np.ndarray
    eta: float = 1.0
    seed: Optional[int] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        phases = np.array(self.phases, dtype=float).reshape(-1)
        x = np.array(self.x, dtype=float).reshape(-1)
        if phases.size != x.size:
            raise ValueError(f"{phases.size} phases for {x.size} samples")
        if x.size < 1:
            raise ValueError("Dataset needs at least one sample")
        phases.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "x", x)

    @property
    def n_samples(self) -> int:
        return int(self.x.size)

    def distinct_phases(self) -> np.ndarray:
        return np.unique(self.phases)


def _single_mode(rho: Union[DensityOperator, FockKet]) -> DensityOperator:
    if isinstance(rho, FockKet):
        rho = rho.to_density()
    if rho.num_modes != 1:
        raise DimensionError(f"Homodyne sampling needs a single mode, got {rho.mode_dims}")
    return rho


def quadrature_distribution(rho: DensityOperator, theta: float, xs: np.ndarray) -> np.ndarray:
    """p(x|theta) = sum_mn rho_mn psi_m(x) psi_n(x) exp(i (n - m) theta)"""
    D = rho.dim
    psi = quadrature_wavefunctions(D, xs) * np.exp(1j * theta * np.arange(D))[:, None]
    return np.real(np.einsum("mg,mn,ng->g", psi.conj(), rho.matrix, psi))


def sample_homodyne(
    rho: Union[DensityOperator, FockKet],
    phases: Sequence[float],
    n_per_phase: int,
    eta: float = 1.0,
    seed: Optional[int] = None,
    x_max: float = SAMPLING_RANGE,
    step: float = SAMPLING_STEP,
) -> QuadratureDataset:
    """
    Draw ``n_per_phase`` quadrature values at every LO phase from the state
    behind a loss channel of efficiency ``eta``. Deterministic given ``seed``.
    """
    rho = _single_mode(rho)
    if not rho.is_valid():
        raise ValueError("Sampling needs a valid density operator")
    if n_per_phase < 1:
        raise ValueError(f"n_per_phase must be >= 1, got {n_per_phase}")
    lossy = loss_channel(rho, eta) if eta < 1.0 else rho
    rng = np.random.default_rng(seed)
    xs = np.arange(-x_max, x_max + 0.5 * step, step)
    all_phases, all_x = [], []
    for theta in phases:
        pdf = quadrature_distribution(lossy, float(theta), xs)
        cdf = cumulative_trapezoid(pdf, xs, initial=0.0)
        if np.any(np.diff(cdf) < -1e-12) or cdf[-1] <= 0.0:
            raise CatgateError(f"Tabulated quadrature CDF is not monotone at theta={theta}")
        cdf = np.maximum.accumulate(cdf) / cdf[-1]
        all_x.append(np.interp(rng.random(n_per_phase), cdf, xs))
        all_phases.append(np.full(n_per_phase, float(theta)))
    return QuadratureDataset(np.concatenate(all_phases), np.concatenate(all_x), float(eta), seed)


def write_dataset(dataset: QuadratureDataset, path: Union[str, Path]):
    seed = UNSEEDED if dataset.seed is None else int(dataset.seed)
    with atomic_write(path) as f:
        f.write(f"# catgate-quadrature v1, eta={fmt(dataset.eta)}, seed={seed}\n")
        for theta, x in zip(dataset.phases, dataset.x):
            f.write(f"{fmt(theta)}\t{fmt(x)}\n")


def read_dataset(path: Union[str, Path]) -> QuadratureDataset:
    """Parse a dataset file; malformed lines raise DatasetFormatError with their line number"""
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines:
        raise DatasetFormatError("empty dataset", 1)
    match = _HEADER_RE.match(lines[0])
    if match is None:
        raise DatasetFormatError(f"bad header {lines[0]!r}", 1)
    try:
        eta = float(match.group(1))
    except ValueError as e:
        raise DatasetFormatError(f"bad eta {match.group(1)!r}", 1) from e
    seed = int(match.group(2))
    phases, xs = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DatasetFormatError(f"expected 'theta_lo<TAB>x', got {line!r}", lineno)
        try:
            theta, x = float(parts[0]), float(parts[1])
        except ValueError as e:
            raise DatasetFormatError(f"non-numeric record {line!r}", lineno) from e
        if not (np.isfinite(theta) and np.isfinite(x)):
            raise DatasetFormatError(f"non-finite record {line!r}", lineno)
        phases.append(theta)
        xs.append(x)
    if not xs:
        raise DatasetFormatError("dataset has no records", len(lines))
    return QuadratureDataset(np.array(phases), np.array(xs), eta, None if seed == UNSEEDED else seed)
